"""Exception types raised by frameforge."""


class FrameforgeError(Exception):
    """Base class for all frameforge errors."""


class InvalidInput(FrameforgeError, ValueError):
    """Raised when an argument is malformed (ragged vectors, NaNs, bad shapes)."""


class OutOfRange(FrameforgeError, IndexError):
    """Raised when a finite sequence is indexed past its length."""


class UnsupportedExact(FrameforgeError):
    """Raised when exact classification is requested for a rule-based sequence."""


class NotAFrame(FrameforgeError):
    """Raised when a construction needs a frame and the input is not one."""


class NotFound(FrameforgeError, KeyError):
    """Raised for unknown gallery names."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""
