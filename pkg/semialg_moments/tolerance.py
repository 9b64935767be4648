
class Tolerance:
    """
    A named numeric threshold.
    mode:
        absolute: the value itself
        floor: value * max(1, scale)
        relative: value * scale
    """
    ABSOLUTE = 'absolute'
    FLOOR = 'floor'
    RELATIVE = 'relative'

    def __init__(self, name: str, value: float, mode: str = ABSOLUTE):
        if value < 0:
            raise ValueError(f'Tolerance {name} must be nonnegative: {value}')
        self.name = name
        self.value = value
        self.mode = mode

    def __str__(self):
        return f'{self.name}={self.value:g} ({self.mode})'

    def with_value(self, value: float):
        return Tolerance(self.name, value, self.mode)

    def threshold(self, scale: float = 1.0) -> float:
        """
        :param scale: magnitude the threshold is measured against, usually |largest eigenvalue|
        """
        scale = abs(scale)
        if self.mode == self.FLOOR:
            return self.value * max(1.0, scale)
        if self.mode == self.RELATIVE:
            return self.value * scale
        return self.value


MEMBERSHIP = Tolerance('membership', 1e-12)
GROUPING = Tolerance('grouping', 1e-12)
LAMBDA_RANGE = Tolerance('lambda-range', 1e-9)
CURVE = Tolerance('curve', 1e-6)
RANK = Tolerance('rank', 1e-10, Tolerance.RELATIVE)
PSD = Tolerance('psd', 1e-8, Tolerance.FLOOR)
SEED = Tolerance('seed', 1e-7, Tolerance.FLOOR)
ANNIHILATION = Tolerance('annihilation', 1e-12)


def as_tolerance(tol, default: Tolerance) -> Tolerance:
    # bare floats keep the mode of the constant they replace
    if tol is None:
        return default
    if isinstance(tol, Tolerance):
        return tol
    return default.with_value(float(tol))
