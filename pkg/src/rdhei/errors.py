"""Exception types raised across the codec."""


class RdheiError(Exception):
    """Base class for all codec errors."""


# PGM parsing
class MalformedHeader(RdheiError):
    pass


class UnsupportedMaxval(RdheiError):
    pass


class TruncatedData(RdheiError):
    pass


class DimensionMismatch(RdheiError):
    pass


# Block layout / permutation
class ImageTooSmall(RdheiError):
    pass


class IndexOutOfRange(RdheiError):
    pass


class NotAPermutation(RdheiError):
    pass


class ShapeClassMismatch(RdheiError):
    pass


# Bit coding
class IllegalBcf(RdheiError):
    pass


class BlockIndexOverflow(RdheiError):
    pass


class LengthMismatch(RdheiError):
    pass


class ChunkLengthMismatch(RdheiError):
    pass


# Embedding
class InsufficientCapacity(RdheiError):
    def __init__(self, message: str, shortfall: int | None = None):
        super().__init__(message)
        self.shortfall = shortfall


class AuxDeadlock(RdheiError):
    pass


class BootstrapUnderflow(RdheiError):
    pass


# Extraction
class AuxStreamStall(RdheiError):
    pass


class HeaderOutOfRange(RdheiError):
    pass


class LengthFieldOverflow(RdheiError):
    pass
