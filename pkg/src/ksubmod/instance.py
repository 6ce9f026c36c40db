"""Instance file format (JSON), canonical serialization, and random instance generation.

An instance file holds a single object::

    {
      "name": "optional label",
      "k": 2,
      "elements": ["a", "b", "c"],
      "function": {"type": "modular", "gains": {"a": {"1": 3, "2": "1/2"}}},
      "matroid": {"type": "uniform", "N": 1}
    }

Numbers are integers or "num/den" strings.  Function types:

* ``table``: ``values`` maps "l1,l2,...,ln" (labels in element order) to a value; must be total.
* ``modular``: ``gains[element][label]``; missing gains are 0.
* ``weighted_coverage``: ``universe`` (list of item names) and
  ``weights[item][element][label]``; missing weights are 0.

Matroid types:

* ``uniform``: ``N``.
* ``partition``: ``blocks``, a list of ``{"elements": [...], "cap": c}`` covering every element once.
* ``graphic``: ``vertices`` (count) and ``edges[element] = [u, v]`` with 0 <= u, v < vertices.
* ``linear_gf2``: ``dim`` and ``columns[element]``, a 0/1 string of length ``dim``.
* ``explicit``: ``independent``, a list of element lists.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .core import GroundSet, KSubmodError, LabeledSet, budget, format_value, to_value
from .functions import (
    KFunction,
    ModularFunction,
    TableFunction,
    WeightedCoverageFunction,
    is_k_submodular,
    is_monotone,
    random_ksubmodular_table,
)
from .matroids import (
    ExplicitMatroid,
    GraphicMatroid,
    LinearMatroidGF2,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    rank,
)

FUNCTION_TYPES = ("table", "modular", "weighted_coverage")
MATROID_TYPES = ("uniform", "partition", "graphic", "linear_gf2", "explicit")
# generator aliases
FUNCTION_ALIASES = {"coverage": "weighted_coverage", "weighted_coverage": "weighted_coverage",
                    "modular": "modular", "table": "table"}


class InstanceError(KSubmodError, ValueError):
    """Malformed instance; ``path`` names the offending key, ``line``/``column`` a syntax error."""

    def __init__(self, message, path: str = "", line: int | None = None, column: int | None = None):
        where = f" at {path}" if path else ""
        if line is not None:
            where = f" at line {line}, column {column}"
        super().__init__(f"{message}{where}")
        self.path = path
        self.line = line
        self.column = column


@dataclass
class Instance:
    ground: GroundSet
    k: int
    function_spec: dict
    matroid_spec: dict
    name: str = field(default="", compare=False)

    def build(self) -> tuple[KFunction, Matroid]:
        """Fresh oracles (with zeroed call counters)."""
        return build_function(self.ground, self.k, self.function_spec), build_matroid(self.ground, self.matroid_spec)

    def to_dict(self) -> dict:
        out = {}
        if self.name:
            out["name"] = self.name
        out["k"] = self.k
        out["elements"] = list(self.ground.elements)
        out["function"] = self.function_spec
        out["matroid"] = self.matroid_spec
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def digest(self) -> str:
        body = {k: v for k, v in self.to_dict().items() if k != "name"}
        return hashlib.sha256(json.dumps(body, sort_keys=True, separators=(",", ":")).encode()).hexdigest()

    def perturbed(self, rng, name: str = "") -> "Instance":
        """Copy with one weight or gain redrawn."""
        spec = copy.deepcopy(self.function_spec)
        elements = self.ground.elements
        e = elements[int(rng.integers(len(elements)))]
        i = str(int(rng.integers(1, self.k + 1)))
        v = int(rng.integers(0, 21))
        if spec["type"] == "weighted_coverage":
            u = spec["universe"][int(rng.integers(len(spec["universe"])))]
            spec["weights"].setdefault(u, {}).setdefault(e, {})[i] = v
        elif spec["type"] == "modular":
            spec["gains"].setdefault(e, {})[i] = v
        else:
            raise ValueError("only modular and coverage instances can be perturbed")
        f = build_function(self.ground, self.k, spec)
        return Instance(self.ground, self.k, f.spec(), self.matroid_spec, name or self.name)


# ---------------------------------------------------------------- parsing


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ValueError(f"duplicate key {key!r}")
        out[key] = value
    return out


def loads(text: str) -> dict:
    try:
        return json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"syntax error: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    except ValueError as exc:
        raise InstanceError(str(exc)) from None


def parse_instance(source) -> Instance:
    """Parse a path or JSON text (or an already decoded dict) into a validated Instance."""
    if isinstance(source, dict):
        data = source
    else:
        if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
            text = Path(source).read_text(encoding="utf-8")
        else:
            text = source
        data = loads(text)
    return instance_from_dict(data)


def _require(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise InstanceError("expected an object", path)
    if key not in obj:
        raise InstanceError(f"missing key {key!r}", path)
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise InstanceError(f"expected {getattr(kind, '__name__', kind)}", f"{path}.{key}" if path else key)
    return value


def _element(ground: GroundSet, e, path: str) -> str:
    if e not in ground:
        raise InstanceError(f"unknown element {e!r}", path)
    return e


def _value(v, path: str):
    try:
        return to_value(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"bad value {v!r}: {exc}", path) from None


def _label(text, k: int, path: str) -> int:
    try:
        i = int(text)
    except (TypeError, ValueError):
        raise InstanceError(f"bad label {text!r}", path) from None
    if not 1 <= i <= k:
        raise InstanceError(f"label {i} outside 1..{k}", path)
    return i


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("top level must be an object")
    unknown = set(data) - {"name", "k", "elements", "function", "matroid"}
    if unknown:
        raise InstanceError(f"unknown keys {sorted(unknown)}")
    k = _require(data, "k", "", int)
    if isinstance(k, bool) or k < 1:
        raise InstanceError("k must be an integer >= 1", "k")
    elements = _require(data, "elements", "", list)
    for q, e in enumerate(elements):
        if not isinstance(e, str):
            raise InstanceError("element identifiers must be strings", f"elements[{q}]")
    try:
        ground = GroundSet(tuple(elements))
    except ValueError as exc:
        raise InstanceError(str(exc), "elements") from None
    name = data.get("name", "")
    if not isinstance(name, str):
        raise InstanceError("name must be a string", "name")
    fspec = _check_function(ground, k, _require(data, "function", "", dict))
    mspec = _check_matroid(ground, _require(data, "matroid", "", dict))
    return Instance(ground, k, fspec, mspec, name)


def _check_function(ground: GroundSet, k: int, spec: dict) -> dict:
    """Validate with key paths, then return the canonical spec of the built oracle."""
    kind = _require(spec, "type", "function", str)
    if kind == "table":
        values = _require(spec, "values", "function", dict)
        size = (k + 1) ** ground.n
        if size > budget("table"):
            raise InstanceError(f"(k+1)^n = {size} exceeds the table budget", "function.values")
        table = [None] * size
        for key, v in values.items():
            path = f"function.values[{key!r}]"
            try:
                labels = tuple(int(t) for t in key.split(",")) if ground.n else ()
            except ValueError:
                raise InstanceError("keys are comma-separated labels", path) from None
            if len(labels) != ground.n or any(not 0 <= t <= k for t in labels):
                raise InstanceError(f"key must list {ground.n} labels in 0..{k}", path)
            table[LabeledSet(ground, k, labels).index()] = _value(v, path)
        missing = [i for i, v in enumerate(table) if v is None]
        if missing:
            x = LabeledSet.from_index(ground, k, missing[0])
            raise InstanceError(f"table is not total ({len(missing)} missing, first {x})", "function.values")
        f = TableFunction(ground, k, table)
    elif kind == "modular":
        gains = _require(spec, "gains", "function", dict)
        clean = {}
        for e, row in gains.items():
            path = f"function.gains.{e}"
            _element(ground, e, path)
            if not isinstance(row, dict):
                raise InstanceError("expected an object of label -> gain", path)
            clean[e] = {}
            for i, g in row.items():
                val = _value(g, f"{path}.{i}")
                if val < 0:
                    raise InstanceError("gains must be nonnegative", f"{path}.{i}")
                clean[e][_label(i, k, f"{path}.{i}")] = val
        f = ModularFunction(ground, k, clean)
    elif kind == "weighted_coverage":
        universe = _require(spec, "universe", "function", list)
        if any(not isinstance(u, str) for u in universe) or len(set(universe)) != len(universe):
            raise InstanceError("universe must list distinct strings", "function.universe")
        weights = _require(spec, "weights", "function", dict)
        clean = {}
        for u, per_e in weights.items():
            path = f"function.weights.{u}"
            if u not in universe:
                raise InstanceError(f"unknown universe item {u!r}", path)
            if not isinstance(per_e, dict):
                raise InstanceError("expected an object of element -> labels", path)
            clean[u] = {}
            for e, row in per_e.items():
                _element(ground, e, f"{path}.{e}")
                if not isinstance(row, dict):
                    raise InstanceError("expected an object of label -> weight", f"{path}.{e}")
                clean[u][e] = {}
                for i, w in row.items():
                    val = _value(w, f"{path}.{e}.{i}")
                    if val < 0:
                        raise InstanceError("weights must be nonnegative", f"{path}.{e}.{i}")
                    clean[u][e][_label(i, k, f"{path}.{e}.{i}")] = val
        f = WeightedCoverageFunction(ground, k, universe, clean)
    else:
        raise InstanceError(f"unknown function type {kind!r}; expected one of {FUNCTION_TYPES}", "function.type")
    return f.spec()


def _check_matroid(ground: GroundSet, spec: dict) -> dict:
    kind = _require(spec, "type", "matroid", str)
    if kind == "uniform":
        N = _require(spec, "N", "matroid", int)
        if isinstance(N, bool) or N < 0:
            raise InstanceError("N must be a nonnegative integer", "matroid.N")
        m = UniformMatroid(ground, N)
    elif kind == "partition":
        blocks = _require(spec, "blocks", "matroid", list)
        members, caps, seen = [], [], {}
        for b, block in enumerate(blocks):
            path = f"matroid.blocks[{b}]"
            elems = _require(block, "elements", path, list)
            cap = _require(block, "cap", path, int)
            if isinstance(cap, bool) or cap < 0:
                raise InstanceError("cap must be a nonnegative integer", f"{path}.cap")
            for q, e in enumerate(elems):
                _element(ground, e, f"{path}.elements[{q}]")
                if e in seen:
                    raise InstanceError(f"element {e!r} already in block {seen[e]}", f"{path}.elements[{q}]")
                seen[e] = b
            members.append(elems)
            caps.append(cap)
        missing = [e for e in ground if e not in seen]
        if missing:
            raise InstanceError(f"blocks do not cover {missing}", "matroid.blocks")
        m = PartitionMatroid(ground, members, caps)
    elif kind == "graphic":
        V = _require(spec, "vertices", "matroid", int)
        if isinstance(V, bool) or V < 0:
            raise InstanceError("vertices must be a nonnegative integer", "matroid.vertices")
        edges = _require(spec, "edges", "matroid", dict)
        for e, uv in edges.items():
            path = f"matroid.edges.{e}"
            _element(ground, e, path)
            if (not isinstance(uv, list) or len(uv) != 2
                    or any(isinstance(t, bool) or not isinstance(t, int) or not 0 <= t < V for t in uv)):
                raise InstanceError(f"expected [u, v] with vertices in 0..{V - 1}", path)
        missing = [e for e in ground if e not in edges]
        if missing:
            raise InstanceError(f"no endpoints for {missing}", "matroid.edges")
        m = GraphicMatroid(ground, V, edges)
    elif kind == "linear_gf2":
        dim = _require(spec, "dim", "matroid", int)
        if isinstance(dim, bool) or dim < 0:
            raise InstanceError("dim must be a nonnegative integer", "matroid.dim")
        columns = _require(spec, "columns", "matroid", dict)
        for e, bits in columns.items():
            path = f"matroid.columns.{e}"
            _element(ground, e, path)
            if not isinstance(bits, str) or len(bits) != dim or set(bits) - {"0", "1"}:
                raise InstanceError(f"expected a 0/1 string of length {dim}", path)
        missing = [e for e in ground if e not in columns]
        if missing:
            raise InstanceError(f"no column for {missing}", "matroid.columns")
        m = LinearMatroidGF2(ground, dim, columns)
    elif kind == "explicit":
        family = _require(spec, "independent", "matroid", list)
        for a, F in enumerate(family):
            if not isinstance(F, list):
                raise InstanceError("expected a list of elements", f"matroid.independent[{a}]")
            for q, e in enumerate(F):
                _element(ground, e, f"matroid.independent[{a}][{q}]")
        m = ExplicitMatroid(ground, family)
    else:
        raise InstanceError(f"unknown matroid type {kind!r}; expected one of {MATROID_TYPES}", "matroid.type")
    return m.spec()


def build_function(ground: GroundSet, k: int, spec: dict) -> KFunction:
    kind = spec["type"]
    if kind == "table":
        values = {tuple(int(t) for t in key.split(",")) if key else (): v for key, v in spec["values"].items()}
        return TableFunction.from_mapping(ground, k, values)
    if kind == "modular":
        return ModularFunction(ground, k, spec["gains"])
    if kind == "weighted_coverage":
        return WeightedCoverageFunction(ground, k, spec["universe"], spec["weights"])
    raise InstanceError(f"unknown function type {kind!r}", "function.type")


def build_matroid(ground: GroundSet, spec: dict) -> Matroid:
    kind = spec["type"]
    if kind == "uniform":
        return UniformMatroid(ground, spec["N"])
    if kind == "partition":
        return PartitionMatroid(ground, [b["elements"] for b in spec["blocks"]], [b["cap"] for b in spec["blocks"]])
    if kind == "graphic":
        return GraphicMatroid(ground, spec["vertices"], spec["edges"])
    if kind == "linear_gf2":
        return LinearMatroidGF2(ground, spec["dim"], spec["columns"])
    if kind == "explicit":
        return ExplicitMatroid(ground, spec["independent"])
    raise InstanceError(f"unknown matroid type {kind!r}", "matroid.type")


# ---------------------------------------------------------------- generation


def _value_draw(rng, high: int = 20):
    num = int(rng.integers(0, high + 1))
    den = int(rng.choice([1, 1, 1, 2, 3]))
    return format_value(to_value(f"{num}/{den}"))


def _random_matroid(rng, ground: GroundSet, kind: str) -> Matroid:
    n = ground.n
    if kind == "uniform":
        return UniformMatroid(ground, int(rng.integers(1, n + 1)))
    if kind == "partition":
        perm = [int(p) for p in rng.permutation(n)]
        nblocks = int(rng.integers(1, n + 1))
        cuts = sorted(int(c) for c in rng.choice(range(1, n), size=nblocks - 1, replace=False)) if nblocks > 1 else []
        bounds = [0, *cuts, n]
        blocks = [sorted(perm[a:b]) for a, b in zip(bounds, bounds[1:])]
        caps = [int(rng.integers(0, len(b) + 1)) for b in blocks]
        if not any(caps):
            caps[int(rng.integers(len(caps)))] = 1
        return PartitionMatroid(ground, [[ground.elements[p] for p in b] for b in blocks], caps)
    if kind == "graphic":
        V = int(rng.integers(2, n + 2))
        edges = {e: [int(rng.integers(V)), int(rng.integers(V))] for e in ground}
        if all(u == v for u, v in edges.values()):
            edges[ground.elements[0]] = [0, 1]
        return GraphicMatroid(ground, V, edges)
    if kind == "linear_gf2":
        d = int(rng.integers(1, n + 1))
        cols = [int(rng.integers(0, 2**d)) for _ in range(n)]
        if not any(cols):
            cols[0] = 1
        return LinearMatroidGF2(ground, d, {e: format(c, f"0{d}b") for e, c in zip(ground, cols)})
    raise ValueError(f"cannot generate matroid type {kind!r}")


def _random_function(rng, ground: GroundSet, k: int, kind: str) -> KFunction:
    if kind == "modular":
        gains = {e: {str(i): _value_draw(rng) for i in range(1, k + 1)} for e in ground}
        return ModularFunction(ground, k, gains)
    if kind == "weighted_coverage":
        universe = [f"u{q + 1}" for q in range(int(rng.integers(1, 5)))]
        weights: dict = {}
        for u in universe:
            for e in ground:
                for i in range(1, k + 1):
                    if rng.random() < 0.5:
                        weights.setdefault(u, {}).setdefault(e, {})[str(i)] = _value_draw(rng)
        return WeightedCoverageFunction(ground, k, universe, weights)
    if kind == "table":
        return random_ksubmodular_table(rng, ground, k)
    raise ValueError(f"cannot generate function type {kind!r}")


def random_instance(rng, *, n: int, k: int, matroid: str, function: str, name: str = "",
                    retries: int = 20, validate: bool = True) -> Instance:
    """Random instance with a rank >= 1 matroid and a certified monotone k-submodular function.

    Certification runs the exhaustive validators when (k+1)^n is within the
    pair budget; failing draws are redrawn up to ``retries`` times.
    """
    fkind = FUNCTION_ALIASES.get(function)
    if fkind is None:
        raise ValueError(f"unknown function type {function!r}")
    if fkind == "table" and (k + 1) ** n > budget("table"):
        raise KSubmodError(f"(k+1)^n = {(k + 1) ** n} exceeds the table budget")
    if n < 1:
        raise ValueError("n must be at least 1")
    ground = GroundSet.of_size(n)
    m = _random_matroid(rng, ground, matroid)
    if rank(m) == 0:  # pragma: no cover - generators guarantee rank >= 1
        raise KSubmodError("generated a rank-0 matroid")
    check = validate and (k + 1) ** n <= budget("pairs")
    for _ in range(retries):
        f = _random_function(rng, ground, k, fkind)
        if not check or (is_monotone(f) and is_k_submodular(f)):
            return Instance(ground, k, f.spec(), m.spec(), name)
    raise KSubmodError(f"no valid {fkind} function after {retries} draws")
