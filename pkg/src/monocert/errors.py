"""Exception types shared across the toolkit."""


class MonocertError(Exception):
    """Base class for all toolkit errors."""


class DegreeError(MonocertError):
    """Polynomial does not have the required degree or is not monic."""


class GaloisClosureError(MonocertError):
    """Root multiset is not closed under Galois conjugation."""


class FormNotUniqueError(MonocertError):
    """The invariant symmetric form is not unique up to scale."""


class DegenerateFormError(MonocertError):
    """Symmetric form has rank below the ambient dimension."""


class IndexNotFoundError(MonocertError):
    """No power of the matrix became unipotent within the search cap."""


class SingularTransformError(MonocertError):
    """Linear transformation is not invertible."""


class NotFiniteOrderError(MonocertError):
    """Matrix was expected to have finite order but does not."""


class InvolutionPropertyError(MonocertError):
    """The reversal involution does not satisfy its defining identities."""


class DivergenceError(MonocertError):
    """Power iteration failed to stabilize to a dominant direction."""


class SchemaError(MonocertError):
    """A case file does not conform to the expected schema."""

    def __init__(self, message: str, path: str | None = None, field: str | None = None):
        loc = "".join(
            part for part in (f"{path}: " if path else "", f"[{field}] " if field else "")
        )
        super().__init__(f"{loc}{message}")
        self.path = path
        self.field = field


class DuplicateIdError(MonocertError):
    """Two case files declare the same case id."""


class CoprimalityError(MonocertError):
    """The two parameter polynomials share a root."""


class MissingCertificateError(MonocertError):
    """Verification was requested for a case that ships no certificate."""
