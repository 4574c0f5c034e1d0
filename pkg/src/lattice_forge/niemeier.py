"""The 23 negative definite even unimodular lattices of rank 24: root types,
diagram-symmetry orders, shipped glue vectors, and verified construction."""

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd, isqrt

from .definite import RootType, root_sublattice_type
from .exactla import (
    determinant,
    frac_mat_int,
    hermite_normal_form,
    inverse_rational,
    mat_mul,
    transpose,
)
from .lattice import (
    Lattice,
    direct_sum,
    hyperbolic_plane,
    is_even,
    root_lattice,
    signature,
)

__all__ = [
    "ConstructedNiemeier",
    "NiemeierEntry",
    "catalog",
    "construct",
    "entry_by_label",
    "k3_lattice",
    "parse_root_type",
]

_O2_ORDERS = {
    "1": 1,
    "S2": 2,
    "S3": 6,
    "A4": 12,
    "S4": 24,
    "S5": 120,
    "S6": 720,
    "AGL(3,2)": 1344,
    "M12": 95040,
    "M24": 244823040,
}

# index, root type, order of the component-wise symmetries, symmetry group
# induced on the set of components, total order
_TABLE = (
    (1, "D24", 1, "1", 1),
    (2, "D16 + E8", 1, "1", 1),
    (3, "E8^3", 1, "S3", 6),
    (4, "A24", 2, "1", 2),
    (5, "D12^2", 1, "S2", 2),
    (6, "A17 + E7", 2, "1", 2),
    (7, "D10 + E7^2", 1, "S2", 2),
    (8, "A15 + D9", 2, "1", 2),
    (9, "D8^3", 1, "S3", 6),
    (10, "A12^2", 2, "S2", 4),
    (11, "A11 + D7 + E6", 2, "1", 2),
    (12, "E6^4", 2, "S4", 48),
    (13, "A9^2 + D6", 2, "S2", 4),
    (14, "D6^4", 1, "S4", 24),
    (15, "A8^3", 2, "S3", 12),
    (16, "A7^2 + D5^2", 2, "S2 x S2", 8),
    (17, "A6^4", 2, "A4", 24),
    (18, "A5^4 + D4", 2, "S4", 48),
    (19, "D4^6", 3, "S6", 2160),
    (20, "A4^6", 2, "S5", 240),
    (21, "A3^8", 2, "AGL(3,2)", 2688),
    (22, "A2^12", 2, "M12", 190080),
    (23, "A1^24", 1, "M24", 244823040),
)

_GLUE_FILES = {
    "A1^24": "glue_a1_24.json",
    "A2^12": "glue_a2_12.json",
    "A5^4 + D4": "glue_a5_4_d4.json",
}


def parse_root_type(label):
    """Inverse of RootType.label(): "A5^4 + D4" -> RootType."""
    comps = []
    for part in label.split(" + "):
        if "^" in part:
            head, mult = part.split("^")
            mult = int(mult)
        else:
            head, mult = part, 1
        kind, n = head[0], int(head[1:])
        if kind not in "ADE":
            raise ValueError("unknown component %r" % (part,))
        comps.extend([(kind, n)] * mult)
    return RootType(tuple(sorted(comps)))


@dataclass(frozen=True)
class NiemeierEntry:
    index: int
    root_type: RootType
    o1_order: int
    o2_name: str
    o_total: int
    glue: tuple  # rows of Fractions in root-basis coordinates, or None


def _load_glue(label):
    name = _GLUE_FILES.get(label)
    if name is None:
        return None
    path = resources.files("lattice_forge") / "data" / name
    payload = json.loads(path.read_text())
    if payload["root_type"] != label:
        raise ValueError("glue file %s is labeled %r" % (name, payload["root_type"]))
    return tuple(tuple(Fraction(x) for x in row) for row in payload["glue"])


def _o2_order(name):
    total = 1
    for factor in name.split(" x "):
        total *= _O2_ORDERS[factor]
    return total


@lru_cache(maxsize=1)
def _catalog():
    entries = []
    for index, label, o1, o2, total in _TABLE:
        if o1 * _o2_order(o2) != total:
            raise ValueError(
                "symmetry orders for %s are inconsistent: %d * |%s| != %d"
                % (label, o1, o2, total))
        rt = parse_root_type(label)
        if rt.rank != 24:
            raise ValueError("root type %s does not have rank 24" % label)
        entries.append(NiemeierEntry(index, rt, o1, o2, total, _load_glue(label)))
    return tuple(entries)


def catalog():
    """All 23 entries, ordered by decreasing component size."""
    return list(_catalog())


def entry_by_label(label):
    rt = parse_root_type(label)
    for entry in _catalog():
        if entry.root_type == rt:
            return entry
    raise KeyError("no rank-24 root type %r" % (label,))


def _root_sum(root_type):
    comps = [root_lattice(kind, n, scale=-1) for kind, n in root_type.components]
    return direct_sum(*comps)


@dataclass(frozen=True)
class ConstructedNiemeier:
    """A constructed overlattice together with its simple roots.

    root_rows[i] is the i-th simple root of the glued root system written in
    the basis of .lattice; components are laid out in catalog order, simple
    roots chained within each component.
    """

    entry: NiemeierEntry
    lattice: Lattice
    root_rows: tuple


def _fail(entry, reason):
    raise ValueError("glue data for %s failed self-verification: %s"
                     % (entry.root_type.label(), reason))


@lru_cache(maxsize=None)
def construct(entry):
    """Overlattice of the rescaled root lattice extended by the glue rows."""
    if entry.glue is None:
        raise ValueError("no glue vectors shipped for %s"
                         % entry.root_type.label())
    base = _root_sum(entry.root_type)
    n = base.rank
    disc_base = abs(determinant(base.gram))
    if isqrt(disc_base) ** 2 != disc_base:
        _fail(entry, "root lattice discriminant %d is not a square" % disc_base)

    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for row in entry.glue:
        if len(row) != n:
            _fail(entry, "glue row of length %d" % len(row))
        rows.append(list(row))
    den = 1
    for row in rows:
        for f in row:
            den = den * f.denominator // gcd(den, f.denominator)
    int_rows = [[int(f * den) for f in row] for row in rows]
    h, _ = hermite_normal_form(int_rows)
    basis = [[Fraction(x, den) for x in row] for row in h if any(row)]
    if len(basis) != n:
        _fail(entry, "glue rows drop the rank to %d" % len(basis))

    try:
        gram = frac_mat_int(mat_mul(mat_mul(basis, base.gram), transpose(basis)))
    except ValueError:
        _fail(entry, "glued pairing is not integral")
    lat = Lattice(gram, label="N(%s)" % entry.root_type.label())
    if abs(determinant(gram)) != 1:
        _fail(entry, "overlattice has discriminant %d" % determinant(gram))
    if not is_even(lat):
        _fail(entry, "overlattice is odd")
    sig = signature(lat)
    if (sig.plus, sig.minus) != (0, n):
        _fail(entry, "signature (%d, %d)" % (sig.plus, sig.minus))
    if root_sublattice_type(lat) != entry.root_type:
        _fail(entry, "root system grew beyond %s" % entry.root_type.label())

    root_rows = tuple(tuple(r) for r in frac_mat_int(inverse_rational(basis)))
    return ConstructedNiemeier(entry=entry, lattice=lat, root_rows=root_rows)


def k3_lattice():
    """U^3 + E8(-1)^2, the even unimodular lattice of signature (3, 19)."""
    return direct_sum(
        hyperbolic_plane(), hyperbolic_plane(), hyperbolic_plane(),
        root_lattice("E", 8, scale=-1), root_lattice("E", 8, scale=-1))
