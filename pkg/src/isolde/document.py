# inspired by https://github.com/GoogleCloudPlatform/datastore-ndb-python/blob/master/ndb/model.py
import json
import logging
from fractions import Fraction
from typing import Any, Optional, Type, TypeVar

import jsonschema

from .exceptions import IsoldeValidationError
from .grammar import check_letter_bounded, parikh_image, parse_grammar
from .isolation import Problem, check_problem
from .property import (
    BaseProperty,
    IntegerProperty,
    JsonProperty,
    RationalMatrixProperty,
    RationalProperty,
    RationalVectorProperty,
    pointer_of,
)
from .semilinear import LinearSet, SemilinearSet
from .settings import Settings
from .stochastic import Letter, PFA

logger = logging.getLogger(__name__)


class MetaDocument(type):
    def __init__(cls, name, bases, classdict):
        super(MetaDocument, cls).__init__(name, bases, classdict)
        cls._fix_up_properties()  # type: ignore


Document = TypeVar("Document", bound="BaseDocument")


class BaseDocument(object, metaclass=MetaDocument):
    """BaseDocument

    A JSON document described by its properties. The whole document is checked
    against the generated JSON Schema before any property converts its value.

    Examples:
        .. code-block:: python

            from isolde.document import BaseDocument
            from isolde.property import IntegerProperty, RationalProperty

            class Threshold(BaseDocument):
                states = IntegerProperty(required=True, minimum=1)
                lam = RationalProperty(required=True, name="lambda")

            doc = Threshold.from_json({"states": 2, "lambda": "3/4"})
            doc.lam  # Fraction(3, 4)
            doc.to_json()  # {"states": 2, "lambda": "3/4"}
    """

    ADDITIONAL_PROPERTIES = False
    _properties: dict = {}

    @classmethod
    def _fix_up_properties(cls):
        cls._properties = {}
        for klass in reversed(cls.__mro__):
            for name in klass.__dict__.keys():
                prop = getattr(cls, name, None)
                if isinstance(prop, BaseProperty):
                    prop._fix_up(cls, name)
                    if prop._name is not None:
                        cls._properties[prop._name] = prop

    def __init__(self):
        self._doc_values = {}

    @classmethod
    def to_schema(cls) -> dict:
        """Generate JsonSchema definition for the document

        Returns:
            dict: JsonSchema definition
        """
        required = []
        props = {}
        for k, prop in cls._properties.items():
            if prop.required:
                required.append(k)
            props[k] = prop._get_schema()
        required.sort()
        return {
            "type": "object",
            "required": required,
            "properties": props,
            "additionalProperties": cls.ADDITIONAL_PROPERTIES,
        }

    @classmethod
    def validate_json(cls, values: Any):
        """Check raw JSON against :func:`to_schema`.

        Raises:
            IsoldeValidationError: pointer of the first error (in document order), every error listed
        """
        validator = jsonschema.Draft7Validator(cls.to_schema())
        errors = sorted(validator.iter_errors(values), key=lambda e: [str(p) for p in e.absolute_path])
        if errors:
            first = errors[0]
            pointer = pointer_of(first.absolute_path)
            raise IsoldeValidationError(
                "{0}: {1}".format(pointer or "/", first.message),
                pointer=pointer,
                violations=["{0}: {1}".format(pointer_of(e.absolute_path) or "/", e.message) for e in errors],
            )

    @classmethod
    def from_json(cls: Type[Document], values: Any) -> Document:
        """Validate raw JSON and build the document."""
        cls.validate_json(values)
        obj = cls()
        for k, prop in cls._properties.items():
            if k in values:
                prop._set_json_value(obj, values[k], pointer="/" + k)
        obj.validate()
        return obj

    @classmethod
    def loads(cls: Type[Document], text: str) -> Document:
        try:
            values = json.loads(text)
        except ValueError as e:
            raise IsoldeValidationError("not a JSON document: {0}".format(e), pointer="")
        return cls.from_json(values)

    @classmethod
    def create_by_dict(cls: Type[Document], values: dict) -> Document:
        """Build a document from application values (Fractions, matrices, ...)."""
        obj = cls()
        for k, prop in cls._properties.items():
            if k in values:
                prop._set_app_value(obj, values[k])
        obj._validate()
        obj.validate()
        return obj

    def to_dict(self) -> dict:
        return {k: prop._get_app_value(self) for k, prop in self._properties.items()}

    def to_json(self) -> dict:
        values = {}
        for k, prop in self._properties.items():
            v = prop._get_json_value(self)
            if v is not None:
                values[k] = v
        return values

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def _validate(self):
        for prop in self._properties.values():
            prop._validate(prop._get_app_value(self), self)

    def validate(self):
        """Validate document instance. Raise Exception if invalid"""
        pass


LETTERS_SCHEMA = {
    "type": "array",
    "minItems": 1,
    "items": {
        "type": "object",
        "required": ["name", "matrix"],
        "additionalProperties": False,
        "properties": {
            "name": {"type": "string", "minLength": 1},
            "matrix": RationalMatrixProperty().get_schema(),
        },
    },
}

NATURALS = {"type": "array", "items": {"type": "integer", "minimum": 0}}

LANGUAGE_SCHEMA = {
    "type": "object",
    "oneOf": [
        {
            "required": ["grammar"],
            "additionalProperties": False,
            "properties": {"grammar": {"type": "string"}},
        },
        {
            "required": ["semilinear"],
            "additionalProperties": False,
            "properties": {
                "semilinear": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["base"],
                        "additionalProperties": False,
                        "properties": {
                            "base": NATURALS,
                            "periods": {"type": "array", "items": NATURALS},
                        },
                    },
                }
            },
        },
    ],
}

FINAL_SCHEMA = {"type": "array", "minItems": 1, "items": {"enum": [0, 1]}}

_MATRIX = RationalMatrixProperty(required=True)


class ProblemDocument(BaseDocument):
    """The problem file read and written by the command line.

    Examples:
        .. code-block:: json

            {
              "states": 2,
              "initial": ["0", "1"],
              "final": [1, 0],
              "letters": [{"name": "a", "matrix": [["1", "0"], ["1/2", "1/2"]]}],
              "language": {"grammar": "alphabet: a\\nS -> a S | eps\\n"},
              "lambda": "9/10"
            }
    """

    states = IntegerProperty(required=True, minimum=1)
    initial = RationalVectorProperty(required=True)
    final = JsonProperty(required=True, schema=FINAL_SCHEMA)
    letters = JsonProperty(required=True, schema=LETTERS_SCHEMA)
    language = JsonProperty(required=True, schema=LANGUAGE_SCHEMA)
    lam = RationalProperty(required=True, name="lambda")

    def validate(self):
        # matrices are converted here so that bad entries point into /letters
        self._matrices = [
            _MATRIX.from_json_value(letter["matrix"], self, pointer="/letters/{0}/matrix".format(i))
            for i, letter in enumerate(self.letters)
        ]

    def pfa(self) -> PFA:
        letters = tuple(Letter(letter["name"], m) for letter, m in zip(self.letters, self._matrices))
        pfa = PFA(tuple(self.initial), tuple(self.final), letters)
        if self.states != pfa.n:
            raise IsoldeValidationError(
                "states is {0} but initial has {1} entries".format(self.states, pfa.n), pointer="/states"
            )
        return pfa

    def semilinear(self, settings: Optional[Settings] = None) -> SemilinearSet:
        names = tuple(letter["name"] for letter in self.letters)
        if "grammar" in self.language:
            g = parse_grammar(self.language["grammar"])
            if g.alphabet != names:
                raise IsoldeValidationError(
                    "grammar alphabet {0} does not match the letters {1}".format(
                        " ".join(g.alphabet), " ".join(names)
                    ),
                    pointer="/language/grammar",
                )
            check_letter_bounded(g)
            return parikh_image(g, settings=settings)
        components = []
        for i, comp in enumerate(self.language["semilinear"]):
            vectors = [comp["base"]] + list(comp.get("periods", []))
            for v in vectors:
                if len(v) != len(names):
                    raise IsoldeValidationError(
                        "vector of length {0} in a language over {1} letters".format(len(v), len(names)),
                        pointer="/language/semilinear/{0}".format(i),
                    )
            components.append(LinearSet(comp["base"], comp.get("periods", [])))
        return SemilinearSet(len(names), components)

    def to_problem(self, settings: Optional[Settings] = None) -> Problem:
        """Build and validate the :class:`Problem` this document describes.

        Raises:
            IsoldeValidationError: inconsistent document, invalid PFA (every violation listed), bad grammar
        """
        prob = Problem(self.pfa(), self.semilinear(settings=settings), Fraction(self.lam))
        logger.debug(
            "problem: %d states, %d letters, %d components", prob.pfa.n, prob.pfa.letter_count, len(prob.language.components)
        )
        return check_problem(prob)

    @classmethod
    def from_problem(cls, prob: Problem, grammar: Optional[str] = None) -> "ProblemDocument":
        """Document for ``prob``; the language is written as its semilinear set unless ``grammar`` is given."""
        if grammar is not None:
            language = {"grammar": grammar}
        else:
            language = {
                "semilinear": [
                    {"base": list(c.base), "periods": [list(p) for p in c.periods]}
                    for c in prob.language.components
                ]
            }
        letters = [
            {"name": letter.name, "matrix": _MATRIX.to_json_value(letter.matrix, None)}
            for letter in prob.pfa.letters
        ]
        doc = cls.create_by_dict(
            {
                "states": prob.pfa.n,
                "initial": tuple(prob.pfa.initial),
                "final": list(prob.pfa.final),
                "letters": letters,
                "language": language,
                "lambda": prob.lam,
            }
        )
        return doc
