from django.core.exceptions import ImproperlyConfigured
from django.utils.translation import gettext_lazy as _

from rest_framework.serializers import ValidationError
from typing import Iterable, Optional, Sequence


class MissingConfigurationError(ImproperlyConfigured):
    def __init__(self, attribute_name: str) -> None:
        super().__init__(f"Could not retrieve attribute '{attribute_name}'.")


class PresetHandlerMissingError(ImproperlyConfigured):
    def __init__(self, preset_name: str) -> None:
        super().__init__(f"Missing handler in {preset_name} preset configuration.")


class PNCValidationError(ValidationError):
    exit_code = 4

    def __str__(self) -> str:
        return ", ".join(detail for detail in self.detail)


class DataParseError(PNCValidationError):
    exit_code = 2

    def __init__(
        self,
        row: Optional[int] = None,
        column: Optional[str] = None,
        value: Optional[str] = None,
        reason: Optional[str] = None,
    ) -> None:
        if reason is None:
            detail = _(
                "Could not parse value '%(value)s' at row %(row)s, column %(column)s."
            ) % {"value": value, "row": row, "column": column}
        elif row is None:
            detail = _("Could not parse the input: %(reason)s") % {"reason": reason}
        else:
            detail = _("Could not parse row %(row)s: %(reason)s") % {
                "row": row,
                "reason": reason,
            }
        super().__init__(detail=detail, code="data_parse_error")
        self.row = row
        self.column = column


class DimensionMismatchError(PNCValidationError):
    exit_code = 2

    def __init__(self, what: str, expected: int, actual: int) -> None:
        super().__init__(
            detail=_(
                "Dimension mismatch for %(what)s: expected %(expected)s, "
                "got %(actual)s."
            )
            % {"what": what, "expected": expected, "actual": actual},
            code="dimension_mismatch",
        )


class EmptyInputError(PNCValidationError):
    exit_code = 2

    def __init__(self, what: str) -> None:
        super().__init__(
            detail=_("%(what)s must not be empty.") % {"what": what},
            code="empty_input",
        )


class UnknownPresetError(PNCValidationError):
    exit_code = 2

    def __init__(self, name: str, available: Iterable[str]) -> None:
        super().__init__(
            detail=_(
                "Unknown simulation preset '%(name)s'. Available presets: %(presets)s."
            )
            % {"name": name, "presets": ", ".join(sorted(available))},
            code="unknown_preset",
        )


class PayloadValidationError(PNCValidationError):
    exit_code = 2

    def __init__(self, what: str, errors: object) -> None:
        super().__init__(
            detail=_("Invalid %(what)s: %(errors)s.")
            % {"what": what, "errors": errors},
            code="invalid_payload",
        )
        self.errors = errors


class ApexError(PNCValidationError):
    exit_code = 3

    def __init__(self, columns: Optional[Sequence[int]] = None) -> None:
        if columns:
            detail = _(
                "Observations at the apex (zero size) are not allowed: %(columns)s."
            ) % {"columns": ", ".join(str(column) for column in columns)}
        else:
            detail = _("Observation at the apex (zero size) is not allowed.")
        super().__init__(detail=detail, code="apex")
        self.columns = tuple(columns or ())


class NotOnConeError(PNCValidationError):
    exit_code = 3

    def __init__(self, angle: float, opening: float) -> None:
        super().__init__(
            detail=_(
                "Point is not on the cone: angle to axis is %(angle)r, "
                "opening is %(opening)r."
            )
            % {"angle": angle, "opening": opening},
            code="not_on_cone",
        )


class InvalidSizeError(PNCValidationError):
    exit_code = 3

    def __init__(self) -> None:
        super().__init__(detail=_("Sizes must be positive."), code="invalid_size")


class DomainError(PNCValidationError):
    exit_code = 4

    def __init__(self, detail: str) -> None:
        super().__init__(detail=detail, code="domain_error")


class ParameterRangeError(PNCValidationError):
    exit_code = 4

    def __init__(self, name: str, value: object, bounds: str) -> None:
        super().__init__(
            detail=_("Parameter %(name)s=%(value)r is outside its range %(bounds)s.")
            % {"name": name, "value": value, "bounds": bounds},
            code="parameter_out_of_range",
        )
        self.name = name


class NumericalFailureError(PNCValidationError):
    exit_code = 5

    def __init__(self, detail: str) -> None:
        super().__init__(detail=detail, code="numerical_failure")


class RejectionSamplingError(NumericalFailureError):
    def __init__(self, acceptance: float) -> None:
        super().__init__(
            detail=_(
                "Truncation bounds are inconsistent with the residual law "
                "(acceptance rate %(acceptance).3g)."
            )
            % {"acceptance": acceptance}
        )


class NoiseRetryExhaustedError(NumericalFailureError):
    def __init__(self, retries: int) -> None:
        super().__init__(
            detail=_(
                "Noisy observations kept hitting the apex after %(retries)d retries."
            )
            % {"retries": retries}
        )


class BootstrapDegenerateError(NumericalFailureError):
    def __init__(self, skipped: int, replicates: int) -> None:
        super().__init__(
            detail=_(
                "Too many degenerate bootstrap replicates: "
                "%(skipped)d of %(replicates)d."
            )
            % {"skipped": skipped, "replicates": replicates}
        )
