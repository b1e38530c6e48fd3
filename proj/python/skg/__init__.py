"""Random-feature kernel regression on graphs with closed-form selection of
the Gaussian kernel variance."""


class SkgError(RuntimeError):
    """Raised by the native library. ``kind`` names the error category."""

    def __init__(self, kind, message):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.message = message


from ._skg import *  # noqa: E402,F401,F403
from ._skg import __doc__  # noqa: E402,F401
