'''Creation Date: 18/10/26

Exception types raised across discrete_hardy. All of them are ValueErrors, so existing `except ValueError` handling keeps working.
'''


class HardyError(ValueError):
    '''Base class for every error raised by the library.'''


class ValidationError(HardyError):
    '''Invalid parameters, or a regime condition that does not hold.'''


class RegimeError(HardyError):
    '''Regime-level failure: sp = d where a gap is needed, K out of range, or an invalid probe combination.'''


class CapacityError(HardyError):
    '''Enumeration or evaluation would exceed the point budget.'''


class NumericError(HardyError):
    '''Non-finite intermediate value. `index` holds the offending lattice point when it is known.'''

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
