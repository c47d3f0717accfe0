"""Base class for validated configuration documents."""

from typing import Any, ClassVar, List, Type, TypeVar

from pydantic import BaseModel, ConfigDict, ValidationError

from ..errors import AquakernError, InvalidSpecError

SpecT = TypeVar("SpecT", bound="SpecModel")


def validation_problems(exc: ValidationError) -> List[str]:
    """Flatten a pydantic ValidationError into ``location: message`` strings."""
    problems = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"]) or "<root>"
        message = error["msg"].removeprefix("Value error, ")
        problems.append(f"{location}: {message}")
    return problems


class SpecModel(BaseModel):
    """Immutable pydantic model whose ``parse`` raises a domain error."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    error_class: ClassVar[Type[AquakernError]] = InvalidSpecError

    @classmethod
    def parse(cls: Type[SpecT], data: Any = None, **fields: Any) -> SpecT:
        """Validate a mapping (or keyword fields) into the model.

        Args:
            data: Mapping, typically loaded from JSON
            **fields: Field values, merged over ``data``

        Returns:
            Validated model

        Raises:
            InvalidSpecError: Listing every problem found (or ``error_class``)
        """
        payload = dict(data or {})
        payload.update(fields)
        try:
            return cls.model_validate(payload)
        except ValidationError as exc:
            problems = validation_problems(exc)
            raise cls.error_class(
                f"Invalid {cls.__name__}: {len(problems)} problem(s)", problems
            ) from exc
