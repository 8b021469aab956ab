"""Reading and writing bundle descriptions as JSON space files.

A space file carries one bundle: the cohomology rings of its base (either
a single torsion-free presentation shared by all three coefficient rings,
or three explicit presentations tied together by coefficient matrices),
the characteristic classes, an optional fundamental-class pairing, and
the expected outcomes used by the corpus runner.  All integer values are
written as decimal strings so coefficients survive arbitrary precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .gradedring import (
    CoefficientMap,
    Generator,
    GradedRing,
    RingError,
    RingPresentation,
    RewriteRule,
    RingSystem,
    format_exponents,
    parse_exponents,
)
from .intlin import IntMatrix
from .obstruct import BundleData, DataValidationError, Pairing

SCHEMA_VERSION = 1


class SpaceFileError(Exception):
    """The file does not follow the space-file schema."""


_TOP_KEYS = {"schema_version", "name", "description", "rings", "maps",
             "bundle", "expectations"}
_RING_KEYS = {"cutoff", "generators", "relations"}
_GEN_KEYS = {"name", "degree", "order"}
_REL_KEYS = {"lhs", "rhs"}
_BUNDLE_KEYS = {"rank", "base_dimension", "w", "p", "euler", "pairing"}
_PAIRING_KEYS = {"degree", "values"}
_EXPECTATION_KEYS = {"status", "existence", "exit_code", "first", "final",
                     "final_note_contains", "vanishing_candidates",
                     "wu_pairings", "euler_pairing"}
# (name, source ring, target ring, degree shift)
_MAP_SIGNATURES = (
    ("rho2", "integral", "mod2", 0),
    ("rho4", "integral", "mod4", 0),
    ("theta2", "mod2", "mod4", 0),
    ("rho24", "mod4", "mod2", 0),
    ("beta", "mod2", "integral", 1),
    ("sq1", "mod2", "mod2", 1),
)


def _require_dict(obj, what: str) -> dict:
    if not isinstance(obj, dict):
        raise SpaceFileError("%s must be an object" % what)
    return obj


def _check_keys(obj: dict, allowed, what: str) -> None:
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise SpaceFileError("%s has unknown keys: %s" % (what, ", ".join(unknown)))


def _int(value, what: str) -> int:
    if isinstance(value, bool):
        raise SpaceFileError("%s must be an integer" % what)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            pass
    raise SpaceFileError("%s must be an integer or decimal string, got %r"
                         % (what, value))


def _terms(obj, what: str) -> dict:
    obj = _require_dict(obj if obj is not None else {}, what)
    return {str(mon): _int(c, "%s[%r]" % (what, mon)) for mon, c in obj.items()}


def _presentation(section, modulus: int, what: str) -> RingPresentation:
    section = _require_dict(section, what)
    _check_keys(section, _RING_KEYS, what)
    if "cutoff" not in section or "generators" not in section:
        raise SpaceFileError("%s needs 'cutoff' and 'generators'" % what)
    cutoff = _int(section["cutoff"], what + ".cutoff")
    gens = []
    for g in section["generators"]:
        g = _require_dict(g, what + ".generators[]")
        _check_keys(g, _GEN_KEYS, what + ".generators[]")
        gens.append(Generator(str(g["name"]),
                              _int(g["degree"], "generator degree"),
                              _int(g.get("order", 0), "generator order")))
    names = [g.name for g in gens]
    rules = []
    for rel in section.get("relations", ()):
        rel = _require_dict(rel, what + ".relations[]")
        _check_keys(rel, _REL_KEYS, what + ".relations[]")
        try:
            lhs = parse_exponents(names, str(rel["lhs"]))
            rhs = tuple((c, parse_exponents(names, mon))
                        for mon, c in sorted(_terms(rel.get("rhs"),
                                                    what + ".rhs").items()))
        except ValueError as exc:
            raise SpaceFileError("%s: %s" % (what, exc)) from None
        rules.append(RewriteRule(lhs, rhs))
    try:
        return RingPresentation(modulus, cutoff, tuple(gens), tuple(rules))
    except (RingError, ValueError) as exc:
        raise SpaceFileError("%s: %s" % (what, exc)) from None


def _matrix(ring_rows: int, ring_cols: int, rows, what: str) -> IntMatrix:
    if not isinstance(rows, list):
        raise SpaceFileError("%s must be a list of rows" % what)
    entries = []
    for r in rows:
        if not isinstance(r, list):
            raise SpaceFileError("%s rows must be lists" % what)
        entries.append([_int(v, what + " entry") for v in r])
    try:
        return IntMatrix.from_rows(entries) if entries else \
            IntMatrix.zero(ring_rows, ring_cols)
    except ValueError as exc:
        raise SpaceFileError("%s: %s" % (what, exc)) from None


def _ring_system(doc: dict) -> RingSystem:
    rings = _require_dict(doc.get("rings"), "'rings'")
    if "shared" in rings:
        if set(rings) != {"shared"}:
            raise SpaceFileError("'rings.shared' excludes other ring sections")
        if "maps" in doc:
            raise SpaceFileError("the shared-ring form takes no 'maps' section")
        pres = _presentation(rings["shared"], 0, "rings.shared")
        try:
            return RingSystem.with_reduction_defaults(pres)
        except RingError as exc:
            raise SpaceFileError(str(exc)) from None
    if set(rings) != {"integral", "mod2", "mod4"}:
        raise SpaceFileError("'rings' needs either 'shared' or all of "
                             "'integral', 'mod2', 'mod4'")
    try:
        built = {
            "integral": GradedRing(_presentation(rings["integral"], 0,
                                                 "rings.integral")),
            "mod2": GradedRing(_presentation(rings["mod2"], 2, "rings.mod2")),
            "mod4": GradedRing(_presentation(rings["mod4"], 4, "rings.mod4")),
        }
    except RingError as exc:
        raise SpaceFileError(str(exc)) from None
    maps_doc = _require_dict(doc.get("maps"), "'maps'")
    _check_keys(maps_doc, [s[0] for s in _MAP_SIGNATURES], "'maps'")
    maps = {}
    for name, src_key, tgt_key, shift in _MAP_SIGNATURES:
        if name not in maps_doc:
            if name == "sq1":
                continue
            raise SpaceFileError("'maps' is missing %r" % name)
        src, tgt = built[src_key], built[tgt_key]
        mats = {}
        for dkey, rows in _require_dict(maps_doc[name], "maps.%s" % name).items():
            d = _int(dkey, "maps.%s degree" % name)
            td = d + shift
            if d < 0 or d > src.cutoff or td < 0 or td > tgt.cutoff:
                raise SpaceFileError("maps.%s: degree %d out of range" % (name, d))
            mats[d] = _matrix(len(tgt.basis(td)), len(src.basis(d)), rows,
                              "maps.%s[%d]" % (name, d))
        try:
            maps[name] = CoefficientMap(name, src, tgt, shift, mats)
        except RingError as exc:
            raise SpaceFileError(str(exc)) from None
    try:
        return RingSystem(built["integral"], built["mod2"], built["mod4"],
                          rho2=maps["rho2"], rho4=maps["rho4"],
                          theta2=maps["theta2"], rho24=maps["rho24"],
                          beta=maps["beta"], sq1=maps.get("sq1"))
    except RingError as exc:
        raise SpaceFileError(str(exc)) from None


def _element(ring: GradedRing, degree: int, obj, what: str):
    terms = _terms(obj, what)
    try:
        return ring.from_terms(degree, terms)
    except RingError as exc:
        raise SpaceFileError("%s: %s" % (what, exc)) from None


def _bundle(doc: dict, rings: RingSystem) -> BundleData:
    b = _require_dict(doc.get("bundle"), "'bundle'")
    _check_keys(b, _BUNDLE_KEYS, "'bundle'")
    if "rank" not in b or "euler" not in b:
        raise SpaceFileError("'bundle' needs 'rank' and 'euler'")
    rank = _int(b["rank"], "bundle.rank")
    dim = (None if b.get("base_dimension") is None
           else _int(b["base_dimension"], "bundle.base_dimension"))
    w = {}
    for key, terms in _require_dict(b.get("w", {}), "bundle.w").items():
        i = _int(key, "bundle.w index")
        w[i] = _element(rings.mod2, i, terms, "bundle.w[%d]" % i)
    p = {}
    for key, terms in _require_dict(b.get("p", {}), "bundle.p").items():
        k = _int(key, "bundle.p index")
        p[k] = _element(rings.integral, 4 * k, terms, "bundle.p[%d]" % k)
    euler = _element(rings.integral, rank, b["euler"], "bundle.euler")
    pairing = None
    if b.get("pairing") is not None:
        pd = _require_dict(b["pairing"], "bundle.pairing")
        _check_keys(pd, _PAIRING_KEYS, "bundle.pairing")
        degree = _int(pd.get("degree"), "pairing.degree")
        if degree < 0 or degree > rings.integral.cutoff:
            raise SpaceFileError("pairing.degree %d out of range" % degree)
        basis = list(rings.integral.basis_strings(degree))
        values = [0] * len(basis)
        for mon, v in _terms(pd.get("values"), "pairing.values").items():
            if mon not in basis:
                raise SpaceFileError("pairing.values names unknown monomial %r"
                                     % mon)
            values[basis.index(mon)] = v
        pairing = Pairing(degree, values)
    return BundleData(rank, rings, w, p, euler, pairing=pairing,
                      base_dimension=dim)


@dataclass(frozen=True)
class SpaceFile:
    """One parsed space file: the bundle plus its expected outcomes."""

    name: str
    bundle: BundleData
    description: str = ""
    expectations: Mapping = field(default_factory=dict)
    path: Optional[Path] = None


def space_file_from_doc(doc, default_name: str = "",
                        path: Optional[Path] = None) -> SpaceFile:
    doc = _require_dict(doc, "space file")
    _check_keys(doc, _TOP_KEYS, "space file")
    version = _int(doc.get("schema_version"), "schema_version")
    if version != SCHEMA_VERSION:
        raise SpaceFileError("unsupported schema_version %d (expected %d)"
                             % (version, SCHEMA_VERSION))
    name = str(doc.get("name") or default_name)
    if not name:
        raise SpaceFileError("space file needs a 'name'")
    expectations = _require_dict(doc.get("expectations", {}), "'expectations'")
    _check_keys(expectations, _EXPECTATION_KEYS, "'expectations'")
    rings = _ring_system(doc)
    bundle = _bundle(doc, rings)
    return SpaceFile(name=name, bundle=bundle,
                     description=str(doc.get("description", "")),
                     expectations=dict(expectations), path=path)


def space_file_from_text(text: str, default_name: str = "",
                         path: Optional[Path] = None) -> SpaceFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpaceFileError("invalid JSON: %s" % exc) from None
    return space_file_from_doc(doc, default_name, path)


def load_space_file(path) -> SpaceFile:
    path = Path(path)
    return space_file_from_text(path.read_text(encoding="utf-8"),
                                default_name=path.stem, path=path)


def parse_space_file(path) -> BundleData:
    """Parse a space file and return its fully validated bundle."""
    return load_space_file(path).bundle


# -- serialization ------------------------------------------------------


def _terms_doc(x) -> dict:
    return {mon: str(c) for mon, c in sorted(x.terms().items())}


def _pres_doc(ring: GradedRing) -> dict:
    pres = ring.presentation
    names = list(pres.names)
    gens = []
    for g in pres.generators:
        item = {"name": g.name, "degree": g.degree}
        if g.order:
            item["order"] = g.order
        gens.append(item)
    rels = []
    for rule in pres.rules:
        rhs = {format_exponents(names, mon): str(c) for c, mon in rule.rhs}
        rels.append({"lhs": format_exponents(names, rule.lhs), "rhs": rhs})
    return {"cutoff": pres.cutoff, "generators": gens, "relations": rels}


def _maps_doc(rings: RingSystem) -> dict:
    out = {}
    for name, _, _, _ in _MAP_SIGNATURES:
        m: CoefficientMap = getattr(rings, name)
        degrees = {}
        for d in sorted(m.matrices):
            M = m.matrices[d]
            if all(M[i, j] == 0 for i in range(M.rows) for j in range(M.cols)):
                continue
            degrees[str(d)] = [[str(M[i, j]) for j in range(M.cols)]
                               for i in range(M.rows)]
        out[name] = degrees
    return out


def serialize_space_file(sf: SpaceFile) -> dict:
    """Canonical document for a space file (explicit three-ring form)."""
    data = sf.bundle
    rings = data.rings
    bundle = {
        "rank": data.rank,
        "w": {str(i): _terms_doc(wi) for i, wi in sorted(data.w.items())},
        "p": {str(k): _terms_doc(pk) for k, pk in sorted(data.p.items())},
        "euler": _terms_doc(data.euler),
    }
    if data.base_dimension is not None:
        bundle["base_dimension"] = data.base_dimension
    if data.pairing is not None:
        basis = rings.integral.basis_strings(data.pairing.degree)
        bundle["pairing"] = {
            "degree": data.pairing.degree,
            "values": {mon: str(v)
                       for mon, v in zip(basis, data.pairing.values) if v},
        }
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": sf.name,
        "rings": {
            "integral": _pres_doc(rings.integral),
            "mod2": _pres_doc(rings.mod2),
            "mod4": _pres_doc(rings.mod4),
        },
        "maps": _maps_doc(rings),
        "bundle": bundle,
    }
    if sf.description:
        doc["description"] = sf.description
    if sf.expectations:
        doc["expectations"] = dict(sf.expectations)
    return doc


def dump_space_file(sf: SpaceFile) -> str:
    return json.dumps(serialize_space_file(sf), indent=2, sort_keys=True) + "\n"
