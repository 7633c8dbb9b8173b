"""Tunable engine defaults.

Everything here is configuration, not contract: the values are the documented
defaults and can be overridden per engine instance.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class EngineConfig:
    # How many rows from an "other"/set reference a 1-n or n chart may encode,
    # on top of the always-present singleton.
    top_k: int = 10

    # Fan-out cap: at most this many interpretations surfaced per implicit
    # reference. The recommender consumes only the chosen one.
    max_interpretations: int = 3

    # Invented default for weighted medal metrics (gold, silver, bronze).
    medal_weights: tuple[float, float, float] = (3.0, 2.0, 1.0)

    # Aggregate used by the singleton-vs-group and set-summary bar designs.
    # The aggregate name is always spelled out in the axis title.
    aggregate: str = "mean"

    # Edit-distance-1 matching for attribute/value phrases. Off by default:
    # surprising matches in small schemas are worse than a miss.
    fuzzy_match: bool = False

    # Two-color policy: base hue for ordinary marks, accent for the
    # highlighted/query entity, alt for the second group in paired charts.
    base_color: str = "#4C78A8"
    accent_color: str = "#F58518"
    alt_color: str = "#E45756"

    # Upload cap for the HTTP service, bytes.
    max_upload_bytes: int = 5 * 1024 * 1024

    # Session lifetime for the HTTP service, seconds.
    session_ttl: float = 3600.0

    extra: dict = field(default_factory=dict, compare=False)


DEFAULT_CONFIG = EngineConfig()
