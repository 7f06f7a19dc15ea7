import copy
import re
from fractions import Fraction
from typing import Generic, Optional, TypeVar

import jsonschema
from jsonschema.exceptions import ValidationError as JsonSchemaValidationError

from .exactmath import RatMatrix, rat, rat_str
from .exceptions import IsoldeProgrammingError, IsoldeValidationError

T = TypeVar("T")

RAT_PATTERN = r"^[+-]?[0-9]+(/[0-9]+)?$"
RAT_SCHEMA = {"type": ["string", "integer"], "pattern": RAT_PATTERN}


class BaseProperty(Generic[T]):
    """BaseProperty

    A property maps one key of a JSON document to an application value. You
    can define your own property by extending this BaseProperty.

    Examples:
        .. code-block:: python

            from isolde.document import BaseDocument
            from isolde.property import BaseProperty

            class PercentProperty(BaseProperty):
                # "25%" in JSON, Fraction(1, 4) for the application

                def from_json_value(self, value, obj, pointer=""):
                    return Fraction(int(value.rstrip("%")), 100)

                def to_json_value(self, value, obj):
                    return "{0}%".format(value * 100)

                def get_schema(self):
                    return {"type": "string", "pattern": "^[0-9]+%$"}
    """

    _name: Optional[str]
    required: bool
    schema: Optional[dict]

    def __init__(
        self,
        required: bool = False,
        schema: Optional[dict] = None,
        name: Optional[str] = None,
    ):
        """Constructor

        Args:
            required (bool, optional): If True, property value cannot be None
            schema (dict, optional): JsonSchema definition for property.
            name (str, optional): JSON key, when it differs from the attribute name (e.g. ``lambda``)
        """
        self._name = name
        self.required = required
        self.schema = schema

    def _fix_up(self, cls, name: str):
        if self._name is None:
            self._name = name

    def __get__(self, obj, objtype=None) -> T:
        if obj is None:
            return self  # type: ignore  # __get__ called on class
        return self._get_app_value(obj)

    def __set__(self, obj, value: T):
        self._set_app_value(obj, value)

    def _get_app_value(self, obj) -> T:
        if self._name is None:
            raise IsoldeProgrammingError("property not fixed")
        return obj._doc_values.get(self._name)

    def _set_app_value(self, obj, value):
        self._validate(value, obj)
        obj._doc_values[self._name] = value

    def _get_json_value(self, obj):
        value = self._get_app_value(obj)
        return self.to_json_value(value, obj) if value is not None else None

    def _set_json_value(self, obj, value, pointer: str = ""):
        """Convert a JSON value and store it; conversion failures carry ``pointer``."""
        if self._name is None:
            raise IsoldeProgrammingError("property not fixed")
        if value is not None:
            value = self.from_json_value(value, obj, pointer=pointer)
        obj._doc_values[self._name] = value

    def to_json_value(self, value, obj):
        """Convert application value to JSON value

        Args:
            value: application value, never None
            obj: document instance
        Returns:
            JSON-serializable value
        """
        return value

    def from_json_value(self, value, obj, pointer=""):
        """Convert JSON value to application value

        Args:
            value: schema-valid JSON value, never None
            obj: document instance (may be None)
            pointer (str): JSON pointer of ``value``, for error reporting
        Returns:
            application value
        """
        return value

    def _validate(self, value, obj):
        if self.required and value is None:
            raise IsoldeValidationError("{0} is required".format(self._name), pointer="/" + str(self._name))
        if self.schema and value is not None:
            try:
                jsonschema.validate(value, self.schema)
            except JsonSchemaValidationError as e:
                raise IsoldeValidationError(e.message, pointer="/" + str(self._name))

    def _get_schema(self):
        if self.schema:
            schema = copy.deepcopy(self.schema)
        else:
            schema = self.get_schema()
        return schema

    def get_schema(self):
        """Get JsonSchema definition for property

        Returns:
            dict: JsonSchema definition
        """
        return {}


class IntegerProperty(BaseProperty[int]):
    def __init__(self, minimum: Optional[int] = None, **kwargs):
        super().__init__(**kwargs)
        self.minimum = minimum

    def from_json_value(self, value, obj, pointer=""):
        return int(value)

    def get_schema(self):
        schema = {"type": "integer"}
        if self.minimum is not None:
            schema["minimum"] = self.minimum
        return schema


def parse_rat(value, pointer: str = "") -> Fraction:
    """Parse a rat-string (``"p/q"`` or integer literal) or JSON integer exactly."""
    try:
        return rat(value)
    except ZeroDivisionError:
        raise IsoldeValidationError("zero denominator in {0!r}".format(value), pointer=pointer)
    except (ValueError, IsoldeProgrammingError):
        raise IsoldeValidationError("invalid rational {0!r}".format(value), pointer=pointer)


class RationalProperty(BaseProperty[Fraction]):
    """Exact rational, written in JSON as ``"p/q"`` (an integer literal or JSON integer is accepted)."""

    def from_json_value(self, value, obj, pointer=""):
        return parse_rat(value, pointer)

    def to_json_value(self, value, obj):
        return rat_str(value)

    def get_schema(self):
        return copy.deepcopy(RAT_SCHEMA)


class RationalVectorProperty(BaseProperty[tuple]):
    def from_json_value(self, value, obj, pointer=""):
        return tuple(parse_rat(x, "{0}/{1}".format(pointer, i)) for i, x in enumerate(value))

    def to_json_value(self, value, obj):
        return [rat_str(x) for x in value]

    def get_schema(self):
        return {"type": "array", "minItems": 1, "items": copy.deepcopy(RAT_SCHEMA)}


class RationalMatrixProperty(BaseProperty[RatMatrix]):
    """Rectangular matrix of rat-strings; rows of unequal length are rejected with the row's pointer."""

    def from_json_value(self, value, obj, pointer=""):
        rows = []
        for i, row in enumerate(value):
            if rows and len(row) != len(rows[0]):
                raise IsoldeValidationError(
                    "row {0} has {1} entries, expected {2}".format(i, len(row), len(rows[0])),
                    pointer="{0}/{1}".format(pointer, i),
                )
            rows.append([parse_rat(x, "{0}/{1}/{2}".format(pointer, i, j)) for j, x in enumerate(row)])
        return RatMatrix(rows)

    def to_json_value(self, value, obj):
        return [[rat_str(x) for x in row] for row in value]

    def get_schema(self):
        row = {"type": "array", "minItems": 1, "items": copy.deepcopy(RAT_SCHEMA)}
        return {"type": "array", "minItems": 1, "items": row}


class JsonProperty(BaseProperty[T]):
    """Plain dict or list value, checked against its ``schema``.

    Examples:
        .. code-block:: python

            FINAL_SCHEMA = {"type": "array", "items": {"enum": [0, 1]}}

            class Indicator(BaseDocument):
                final = JsonProperty(schema=FINAL_SCHEMA, required=True)
    """

    def from_json_value(self, value, obj, pointer=""):
        return copy.deepcopy(value)

    def to_json_value(self, value, obj):
        return copy.deepcopy(value)

    def get_schema(self):
        return {"type": ["object", "array"]}


def pointer_of(path) -> str:
    """JSON pointer (RFC 6901) for a jsonschema error path."""
    return "".join("/" + re.sub("/", "~1", re.sub("~", "~0", str(p))) for p in path)
