"""Regenerate data/joe-kuo-1024.txt from scipy's embedded Joe-Kuo table.

scipy ships the same Joe-Kuo direction numbers as a compressed array; this
script re-emits the first 1024 dimensions in the published d/s/a/m_i text
format so the parser in wosq.samplers reads the canonical layout.
"""

import inspect
import os

import numpy as np
from scipy.stats import _sobol

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "wosq", "data",
                   "joe-kuo-1024.txt")
DIMS = 1024


def main():
    src = os.path.join(os.path.dirname(inspect.getfile(_sobol)),
                       "_sobol_direction_numbers.npz")
    z = np.load(src)
    poly = z["poly"]
    vinit = z["vinit"]
    with open(OUT, "w") as fh:
        fh.write("d       s       a       m_i\n")
        # row index i holds dimension i+1; dimension 1 is implicit
        for i in range(1, DIMS):
            p = int(poly[i])
            s = p.bit_length() - 1
            a = (p - (1 << s) - 1) >> 1
            m = " ".join(str(int(v)) for v in vinit[i][:s])
            fh.write(f"{i + 1}\t{s}\t{a}\t{m}\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
