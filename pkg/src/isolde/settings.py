from dataclasses import dataclass, fields, replace
from typing import Optional

from .exceptions import IsoldeProgrammingError


@dataclass(frozen=True)
class Settings:
    """Budgets and limits shared by every decision procedure.

    Attributes:
        max_nonterminals (int): Largest grammar accepted by :func:`isolde.grammar.parikh_image`.
        parikh_budget (int): Max distinct tree summaries kept during one Parikh construction.
        residue_budget (int): Max residue vectors evaluated by one limit value computation.
        node_budget (int): Max branch nodes explored by one isolation decision.
        decay_ceiling (int): Max power searched when certifying decay of a letter.
        sequence_budget (int): Max letter sequences tried for bounded alternation.
        witness_checks (int): Family members evaluated when verifying a limit witness.
        workers (int): Thread pool size for component fan-out. 1 means serial.
    """

    max_nonterminals: int = 8
    parikh_budget: int = 200000
    residue_budget: int = 10**6
    node_budget: int = 10**6
    decay_ceiling: int = 2**16
    sequence_budget: int = 4096
    witness_checks: int = 20
    workers: int = 1


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Returns:
        Settings: settings instance used in isolde.
    """
    global _settings
    if not _settings:
        _settings = Settings()
    return _settings


def initialize(**kwargs) -> Settings:
    """initialize isolde settings manually

    Args:
        **kwargs: fields of :class:`Settings` to override. Fields not given keep their defaults.
    Returns:
        Settings: the installed settings
    """
    global _settings
    known = {f.name for f in fields(Settings)}
    unknown = sorted(set(kwargs) - known)
    if unknown:
        raise IsoldeProgrammingError("unknown settings: {0}".format(", ".join(unknown)))
    _settings = replace(Settings(), **kwargs)
    return _settings


def resolve(settings: Optional[Settings]) -> Settings:
    return settings if settings is not None else get_settings()
