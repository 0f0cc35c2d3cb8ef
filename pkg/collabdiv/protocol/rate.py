import fractions
import numbers

from collabdiv.shared.errors import InvalidArgumentError


def rate_efficiency(
    users: int, spreading: int, period_ratio: numbers.Rational | int
) -> fractions.Fraction:
    """Information rate relative to non-cooperative orthogonal CDMA.

    ``period_ratio`` is the cooperative over the non-cooperative duration;
    the result is ``users / (spreading * period_ratio)``, so ``2N`` users with
    a doubled duration run at full rate.
    """

    ratio = fractions.Fraction(period_ratio)
    if users <= 0 or spreading <= 0 or ratio <= 0:
        raise InvalidArgumentError("Users, spreading and period ratio must be positive")
    return fractions.Fraction(users) / (spreading * ratio)
