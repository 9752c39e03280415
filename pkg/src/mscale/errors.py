"""Exception hierarchy shared by the library and the CLI."""


class MscaleError(ValueError):
    """Base class for every validation or numeric failure raised by mscale."""


class TooShortError(MscaleError):
    pass


class ZeroVarianceError(MscaleError):
    pass


class DegenerateScaleError(MscaleError):
    """Spread-based coarse-graining requested at scale 1."""


class BadParamError(MscaleError):
    pass


class BadFrequencyError(BadParamError):
    pass


class BadWindowError(MscaleError):
    pass


class NumericBlowupError(MscaleError, ArithmeticError):
    pass


class MixedConfigsError(MscaleError):
    pass


class DegenerateError(MscaleError):
    """Statistical test inputs carry no usable variability."""


class BadPError(MscaleError):
    pass


class InputError(MscaleError):
    """A signal file is missing, unreadable or malformed."""
