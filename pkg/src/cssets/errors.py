class CSSetsError(Exception):
    """Base class for library errors."""


class BudgetExceeded(CSSetsError):
    """A lazy stream or ball enumeration hit its step budget."""


class StreamExhausted(CSSetsError):
    """A finite block stream with ``tail='error'`` was read past its end."""


class OmegaViolation(CSSetsError, ValueError):
    """A window over the naturals does not contain 0."""


class InsufficientData(CSSetsError, ValueError):
    """A window is too short to close a single (alpha, beta) pair."""


class CertificateDomainError(CSSetsError):
    """A certificate's L function is undefined at a requested argument."""


class NotSurjective(CSSetsError, ValueError):
    """A homomorphism onto Z whose generator images have gcd != 1."""
