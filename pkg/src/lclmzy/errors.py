"""Exception hierarchy shared across the package."""


class LclmzyError(Exception):
    """Base class for every error raised by this package."""


# chaotic map ---------------------------------------------------------------

class NonFiniteState(LclmzyError):
    """A map iterate produced NaN or infinity (divergent parameters or corrupted state)."""


class InvalidLength(LclmzyError):
    """A sequence request with a non-positive length or negative burn-in."""


class WindowOutOfRange(LclmzyError):
    """A sequence window does not fit inside the available data."""


# trigram algebra -----------------------------------------------------------

class LengthNotDivisibleBy3(LclmzyError):
    """Obfuscation input whose bit count is not a multiple of 3."""


class InvalidKeyDigit(LclmzyError):
    """Obfuscation key digit outside 0..7 (or an empty key)."""


# key material --------------------------------------------------------------

class BadKeyLength(LclmzyError):
    """Hexadecimal key whose length does not match the round count."""


class InvalidHexKey(LclmzyError):
    """Key string containing a non-hexadecimal character."""


class BadPermutationLength(LclmzyError):
    """Position sequence with the wrong length, or one that is not a permutation."""


class InsufficientSequence(LclmzyError):
    """Integer sequence too short for the requested window."""


# S-box ---------------------------------------------------------------------

class SequenceExhausted(LclmzyError):
    """Chaotic stream ended before 64 distinct 6-bit values appeared."""


class ValueOutOfRange(LclmzyError):
    """Substitution input outside the S-box domain."""


# block cipher --------------------------------------------------------------

class BadScheduleLength(LclmzyError):
    """Round-key schedule whose subkey count is not an even number."""


# pipeline and file formats -------------------------------------------------

class EmptyImage(LclmzyError):
    """Image with zero width or height."""


class BadLength(LclmzyError):
    """Payload whose byte count does not match the declared dimensions."""


class MissingDigest(LclmzyError):
    """Decryption attempted without the per-channel digest in the key bundle."""


class ParseError(LclmzyError):
    """Malformed key-bundle or cipher-image file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# analysis ------------------------------------------------------------------

class EmptyPlane(LclmzyError):
    """Metric requested on a plane with no samples."""


class PlaneTooSmall(LclmzyError):
    """Plane cannot host any adjacent-pixel pair in the requested direction."""


class ZeroVariance(LclmzyError):
    """Correlation is undefined because one side of the pair has zero variance."""


class DimensionMismatch(LclmzyError):
    """Two planes compared pixelwise do not have the same shape."""


class RegionOutOfBounds(LclmzyError):
    """Crop region extends outside the plane."""
