"""The fifteen junction features used for coaxial-stacking prediction."""

from __future__ import annotations

import itertools
import re
from dataclasses import astuple, dataclass, fields
from importlib import resources
from types import MappingProxyType
from typing import Mapping

from .junction import CANONICAL_PAIRS, BasePair, LoopRegion, ThreeWayJunction

__all__ = [
    "FeatureVector",
    "ThermoParams",
    "FEATURE_NAMES",
    "FEATURE_LABELS",
    "max_consecutive_adenines",
    "coax_delta_g",
    "coaxial_stack_pairs",
    "extract_features",
    "format_feature_table",
]

FEATURE_NAMES = (
    "j12", "j23", "j13",
    "min_all", "med_all", "max_all",
    "min_2313", "min_1213", "min_1223",
    "a_j12", "a_j23", "a_j13",
    "dg_h1h2", "dg_h2h3", "dg_h1h3",
)

FEATURE_LABELS = (
    "J12", "J23", "J13",
    "Min(J12, J23, J13)", "Med(J12, J23, J13)", "Max(J12, J23, J13)",
    "Min(J23, J13)", "Min(J12, J13)", "Min(J12, J23)",
    "A(J12)", "A(J23)", "A(J13)",
    "ΔG(H1,H2)", "ΔG(H2,H3)", "ΔG(H1,H3)",
)


@dataclass(frozen=True)
class FeatureVector:
    j12: int
    j23: int
    j13: int
    min_all: int
    med_all: int
    max_all: int
    min_2313: int
    min_1213: int
    min_1223: int
    a_j12: int
    a_j23: int
    a_j13: int
    dg_h1h2: float
    dg_h2h3: float
    dg_h1h3: float

    def as_tuple(self) -> tuple[float, ...]:
        return astuple(self)

    def __len__(self) -> int:
        return len(FEATURE_NAMES)

    def __getitem__(self, k: int) -> float:
        return getattr(self, FEATURE_NAMES[k])

    @classmethod
    def from_sequence(cls, values) -> "FeatureVector":
        values = list(values)
        if len(values) != len(FEATURE_NAMES):
            raise ValueError(f"expected {len(FEATURE_NAMES)} feature values, got {len(values)}")
        kinds = [f.type for f in fields(cls)]
        return cls(*(float(v) if k == "float" else int(v) for v, k in zip(values, kinds)))


_PAIRS = sorted(CANONICAL_PAIRS)
_A_RUN = re.compile("A+")


@dataclass(frozen=True)
class ThermoParams:
    """Stacking table plus a linear junction-loop penalty, all in kcal/mol."""

    wc_stack: Mapping[tuple[str, str], float]
    loop_open: float = 1.75
    loop_per_nt: float = 1.15

    def __post_init__(self) -> None:
        missing = [k for k in itertools.product(_PAIRS, _PAIRS) if k not in self.wc_stack]
        if missing:
            raise ValueError(f"stacking table lacks {len(missing)} entries, e.g. {missing[0]}")
        object.__setattr__(self, "wc_stack", MappingProxyType(dict(self.wc_stack)))

    def stack(self, first: str, second: str) -> float:
        return self.wc_stack[(first, second)]

    @classmethod
    def parse(cls, text: str) -> "ThermoParams":
        table: dict[tuple[str, str], float] = {}
        scalars: dict[str, float] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if len(parts) == 2 and parts[0] in ("loop_open", "loop_per_nt"):
                    scalars[parts[0]] = float(parts[1])
                elif len(parts) == 3:
                    p5, p3 = parts[0].upper(), parts[1].upper()
                    if p5 not in CANONICAL_PAIRS or p3 not in CANONICAL_PAIRS:
                        raise ValueError
                    table[(p5, p3)] = float(parts[2])
                else:
                    raise ValueError
            except ValueError:
                raise ValueError(f"bad parameter line {lineno}: {raw!r}") from None
        return cls(table, **scalars)

    @classmethod
    def load(cls, path=None) -> "ThermoParams":
        """Read a parameter file; with no path, the packaged Turner table."""
        if path is None:
            text = resources.files("csminer.data").joinpath("turner_stack.txt").read_text("utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return cls.parse(text)


def max_consecutive_adenines(loop: LoopRegion | str) -> int:
    bases = loop if isinstance(loop, str) else loop.bases
    return max((len(run) for run in _A_RUN.findall(bases.upper())), default=0)


def coax_delta_g(
    ha_terminal: BasePair,
    hb_terminal: BasePair,
    loop: LoopRegion | int,
    params: ThermoParams,
) -> float:
    """Free energy for two helices meeting across a junction loop.

    ``ha_terminal`` is the loop-adjacent pair of the helix whose strand runs into
    the loop, ``hb_terminal`` that of the helix whose strand leaves it; both are
    oriented with the strand base first (see :func:`coaxial_stack_pairs`). With
    an empty loop the helices stack flush and the stacking table applies;
    otherwise the loop costs ``loop_open + loop_per_nt * length``. Non-canonical
    pairs contribute no stacking energy.
    """
    n = loop if isinstance(loop, int) else len(loop)
    if n > 0:
        return params.loop_open + params.loop_per_nt * n
    if ha_terminal.identity in CANONICAL_PAIRS and hb_terminal.identity in CANONICAL_PAIRS:
        return params.stack(ha_terminal.identity, hb_terminal.identity)
    return 0.0


def coaxial_stack_pairs(j: ThreeWayJunction) -> dict[str, tuple[BasePair, BasePair, LoopRegion]]:
    """Oriented terminal pairs for each helix pair around the junction.

    Walking 5'->3' around the loop: H1's 5' strand enters J12, H2's 5' strand
    leaves it; H2's 3' strand enters J23, H3's 5' strand leaves it; H3's 3' strand
    enters J31 and H1's 3' strand leaves it.
    """
    t1, t2, t3 = j.h1.terminal, j.h2.terminal, j.h3.terminal
    return {
        "h1h2": (t1, t2, j.j12),
        "h2h3": (t2.flipped(), t3, j.j23),
        "h1h3": (t3.flipped(), t1.flipped(), j.j31),
    }


def extract_features(j: ThreeWayJunction, params: ThermoParams) -> FeatureVector:
    n12, n23, n13 = len(j.j12), len(j.j23), len(j.j31)
    lo, mid, hi = sorted((n12, n23, n13))
    stacks = coaxial_stack_pairs(j)
    dg = {k: round(coax_delta_g(a, b, loop, params), 6) for k, (a, b, loop) in stacks.items()}
    return FeatureVector(
        n12, n23, n13,
        lo, mid, hi,
        min(n23, n13), min(n12, n13), min(n12, n23),
        max_consecutive_adenines(j.j12),
        max_consecutive_adenines(j.j23),
        max_consecutive_adenines(j.j31),
        dg["h1h2"], dg["h2h3"], dg["h1h3"],
    )


def format_feature_table(fv: FeatureVector) -> str:
    width = max(len(s) for s in FEATURE_LABELS) + 2
    lines = [f"{'Feature Name'.ljust(width)}Feature Value"]
    for label, name in zip(FEATURE_LABELS, FEATURE_NAMES):
        v = getattr(fv, name)
        text = f"{v:.2f}" if isinstance(v, float) else str(v)
        lines.append(f"{label.ljust(width)}{text}")
    return "\n".join(lines) + "\n"
