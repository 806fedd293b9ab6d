"""Exception types shared across the package.

Each error carries a short machine-readable code that the CLI prints as a
one-line diagnostic.
"""


class WosqError(Exception):
    code = "error"

    def __str__(self):
        msg = super().__str__()
        return f"{self.code}: {msg}" if msg else self.code


class PointOutsideDomainError(WosqError):
    code = "point-outside-domain"


class StartInShellError(WosqError):
    code = "start-in-shell"


class SingularGreenError(WosqError):
    code = "singular-green"


class InvalidSampleSizeError(WosqError):
    code = "invalid-sample-size"


class DimensionUnsupportedError(WosqError):
    code = "dimension-unsupported"


class SamplerDimensionMismatchError(WosqError):
    code = "sampler-dimension-mismatch"


class NoExactSolutionError(WosqError):
    code = "no-exact-solution"


class UnknownExampleError(WosqError):
    code = "unknown-example"


class ConfigError(WosqError):
    code = "bad-config"


class SamplerFileError(WosqError):
    code = "bad-data-file"
