"""JSON input schemas: one top-level object per structure type with a
"kind" discriminator (optional when the subcommand fixes the type).
Validation precedes any mathematics; errors carry the offending path.
"""

from __future__ import annotations

import json
import os

from .core import Element, GradedBasis
from .dgla import ArtinDg, DGLA, Homotopy, DtPolynomial, SmallExtension, UnitalGradedAlgebra
from .errors import InputError
from .freelie import NilpotentLie, TensorSeries
from .gbv import GBVStructure, GradedCommAlgebra, Polyvector
from .lefschetz import CovectorElement, make_key
from .linfty import LInftyStructure
from .scalars import GaussianScalar, parse_rational

MAX_BASIS_ENV = "DEFALG_MAX_BASIS"
DEFAULT_MAX_BASIS = 4096


def max_basis():
    raw = os.environ.get(MAX_BASIS_ENV)
    if raw is None:
        return DEFAULT_MAX_BASIS
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{MAX_BASIS_ENV} must be an integer, got {raw!r}")


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})")


def expect_kind(data, kind):
    found = data.get("kind")
    if found is not None and found != kind:
        raise InputError(f"kind: expected {kind!r}, found {found!r}")


def _field(data, name, path):
    if name not in data:
        raise InputError(f"{path}.{name}: missing field")
    return data[name]


def parse_basis(data, path="basis") -> GradedBasis:
    if not isinstance(data, list) or not data:
        raise InputError(f"{path}: must be a nonempty list")
    if len(data) > max_basis():
        raise InputError(f"{path}: basis size exceeds {MAX_BASIS_ENV} cap")
    names = []
    degrees = []
    for i, entry in enumerate(data):
        names.append(str(_field(entry, "name", f"{path}[{i}]")))
        deg = _field(entry, "degree", f"{path}[{i}]")
        if not isinstance(deg, int):
            raise InputError(f"{path}[{i}].degree: must be an integer")
        degrees.append(deg)
    try:
        return GradedBasis(tuple(names), tuple(degrees))
    except InputError as exc:
        raise InputError(f"{path}: {exc}")


def parse_value(data, basis: GradedBasis, path) -> Element:
    out = Element()
    if not isinstance(data, list):
        raise InputError(f"{path}: must be a list of {{basis, coeff}}")
    for i, entry in enumerate(data):
        name = _field(entry, "basis", f"{path}[{i}]")
        try:
            coeff = parse_rational(_field(entry, "coeff", f"{path}[{i}]"))
        except InputError as exc:
            raise InputError(f"{path}[{i}].coeff: {exc}")
        try:
            out.add_term(basis.index(name), coeff)
        except InputError as exc:
            raise InputError(f"{path}[{i}].basis: {exc}")
    return out


def _parse_pair_table(data, basis, path):
    table = {}
    for i, entry in enumerate(data or []):
        left = basis.index(_field(entry, "left", f"{path}[{i}]"))
        right = basis.index(_field(entry, "right", f"{path}[{i}]"))
        value = parse_value(
            _field(entry, "value", f"{path}[{i}]"), basis, f"{path}[{i}].value"
        )
        table[(left, right)] = value
    return table


def _parse_diff_table(data, basis, path):
    diff = {}
    for i, entry in enumerate(data or []):
        src = basis.index(_field(entry, "from", f"{path}[{i}]"))
        diff[src] = parse_value(
            _field(entry, "value", f"{path}[{i}]"), basis, f"{path}[{i}].value"
        )
    return diff


def parse_dgla(data, path="") -> DGLA:
    expect_kind(data, "dgla")
    basis = parse_basis(_field(data, "basis", path or "dgla"), f"{path}basis")
    bracket = _parse_pair_table(data.get("bracket"), basis, f"{path}bracket")
    diff = _parse_diff_table(data.get("differential"), basis, f"{path}differential")
    return DGLA(basis, bracket, diff)


def parse_artin(data, path="") -> ArtinDg:
    expect_kind(data, "artin_dg")
    basis = parse_basis(_field(data, "basis", path or "artin_dg"), f"{path}basis")
    table = _parse_pair_table(data.get("product"), basis, f"{path}product")
    diff = _parse_diff_table(data.get("differential"), basis, f"{path}differential")
    return ArtinDg(basis, table, diff)


def parse_nilpotent_lie(data) -> NilpotentLie:
    expect_kind(data, "nilpotent_lie")
    basis = parse_basis(_field(data, "basis", "nilpotent_lie"))
    if any(d != 0 for d in basis.degrees):
        raise InputError("nilpotent_lie basis degrees must all be 0")
    table = _parse_pair_table(data.get("bracket"), basis, "bracket")
    return NilpotentLie(basis, table)


def parse_tensor_poly(data) -> TensorSeries:
    expect_kind(data, "tensor_poly")
    gens = _field(data, "generators", "tensor_poly")
    order = data.get("truncation", 4)
    out = TensorSeries.zero(tuple(gens), order)
    for i, entry in enumerate(data.get("terms", [])):
        word = _field(entry, "word", f"terms[{i}]")
        idx = []
        for w in word:
            if w not in gens:
                raise InputError(f"terms[{i}].word: unknown generator {w!r}")
            idx.append(gens.index(w))
        coeff = parse_rational(_field(entry, "coeff", f"terms[{i}]"))
        out.add_term(tuple(idx), coeff)
    return out


def parse_pair_element(data, M, path):
    """Element of a tensor DGLA given as [{"l": name, "a": name, "coeff"}]."""
    out = Element()
    for i, entry in enumerate(data or []):
        l_name = _field(entry, "l", f"{path}[{i}]")
        a_name = _field(entry, "a", f"{path}[{i}]")
        coeff = parse_rational(_field(entry, "coeff", f"{path}[{i}]"))
        li = M.L.basis.index(l_name)
        ai = M.A.basis.index(a_name)
        out.add_term(M.pair_index[(li, ai)], coeff)
    return out


def parse_components(data, basis, target_basis, path="components"):
    """{"components":[{"arity": k, "entries":[{"word": [...], "value": [...]}]}]}
    -> {arity: {word tuple: Element}}."""
    tables = {}
    for i, comp in enumerate(data or []):
        arity = _field(comp, "arity", f"{path}[{i}]")
        table = {}
        for j, entry in enumerate(comp.get("entries", [])):
            word = tuple(
                basis.index(w) for w in _field(entry, "word", f"{path}[{i}][{j}]")
            )
            if len(word) != arity:
                raise InputError(f"{path}[{i}][{j}].word: length != arity")
            table[word] = parse_value(
                _field(entry, "value", f"{path}[{i}][{j}]"),
                target_basis,
                f"{path}[{i}][{j}].value",
            )
        if table:
            tables[arity] = table
    return tables


def parse_linfty(data, path="") -> LInftyStructure:
    expect_kind(data, "linfty")
    basis = parse_basis(_field(data, "basis", "linfty"), f"{path}basis")
    convention = data.get("convention", "unsuspended")
    brackets = data.get("brackets", {})
    tables = {}
    for arity_str, entries in brackets.items():
        try:
            arity = int(arity_str)
        except ValueError:
            raise InputError(f"brackets.{arity_str}: arity must be an integer")
        table = {}
        for j, entry in enumerate(entries):
            word = tuple(
                basis.index(w)
                for w in _field(entry, "word", f"brackets.{arity_str}[{j}]")
            )
            table[word] = parse_value(
                _field(entry, "value", f"brackets.{arity_str}[{j}]"),
                basis,
                f"brackets.{arity_str}[{j}].value",
            )
        if table:
            tables[arity] = table
    if convention == "suspended":
        return LInftyStructure(basis, tables)
    if convention == "unsuspended":
        return LInftyStructure.from_unsuspended(basis, tables)
    raise InputError(f"convention: unknown value {convention!r}")


def parse_gbv(data) -> GBVStructure:
    expect_kind(data, "gbv")
    alg = _field(data, "algebra", "gbv")
    basis = parse_basis(_field(alg, "basis", "gbv.algebra"), "gbv.algebra.basis")
    table = _parse_pair_table(alg.get("product"), basis, "gbv.algebra.product")
    algebra = GradedCommAlgebra(basis, table, alg.get("unit"))
    delta = _parse_diff_table(data.get("delta"), basis, "gbv.delta")
    return GBVStructure(algebra, delta)


def parse_polyvector(data, path="") -> Polyvector:
    expect_kind(data, "polyvector")
    nvars = _field(data, "vars", f"{path}polyvector")
    cap = data.get("cap")
    terms = {}
    for i, entry in enumerate(data.get("terms", [])):
        coeff = parse_rational(_field(entry, "coeff", f"{path}terms[{i}]"))
        mono = tuple(_field(entry, "monomial", f"{path}terms[{i}]"))
        frame_raw = _field(entry, "frame", f"{path}terms[{i}]")
        if any(not isinstance(z, int) or not 1 <= z <= nvars for z in frame_raw):
            raise InputError(f"{path}terms[{i}].frame: entries must lie in 1..vars")
        frame = tuple(z - 1 for z in frame_raw)
        key = (mono, frame)
        terms[key] = terms.get(key, 0) + coeff
    try:
        return Polyvector(nvars, cap, terms)
    except InputError as exc:
        raise InputError(f"{path}polyvector: {exc}")


def parse_covector(data) -> CovectorElement:
    expect_kind(data, "covector")
    n = _field(data, "dim", "covector")
    out = CovectorElement(n)
    for i, entry in enumerate(data.get("terms", [])):
        coeff_raw = _field(entry, "coeff", f"terms[{i}]")
        re = parse_rational(_field(coeff_raw, "re", f"terms[{i}].coeff"))
        im = parse_rational(coeff_raw.get("im", "0"))
        try:
            key = make_key(
                n,
                _field(entry, "A", f"terms[{i}]"),
                _field(entry, "B", f"terms[{i}]"),
                _field(entry, "M", f"terms[{i}]"),
                _field(entry, "N", f"terms[{i}]"),
            )
        except InputError as exc:
            raise InputError(f"terms[{i}]: {exc}")
        out.add_term(key, GaussianScalar(re, im))
    return out


def parse_small_extension(data) -> SmallExtension:
    expect_kind(data, "small_extension")
    total = parse_artin(_field(data, "total", "small_extension"), "total.")
    kernel = _field(data, "kernel", "small_extension")
    return SmallExtension(total, kernel)


def parse_unital_algebra(data, path="algebra") -> UnitalGradedAlgebra:
    basis = parse_basis(_field(data, "basis", path), f"{path}.basis")
    table = _parse_pair_table(data.get("product"), basis, f"{path}.product")
    unit = _field(data, "unit", path)
    return UnitalGradedAlgebra(basis, table, unit)


def parse_homotopy(data) -> tuple:
    expect_kind(data, "homotopy")
    source = parse_artin(_field(data, "source", "homotopy"), "source.")
    target = parse_artin(_field(data, "target", "homotopy"), "target.")
    entries = {}
    for i, entry in enumerate(data.get("entries", [])):
        src = source.basis.index(_field(entry, "from", f"entries[{i}]"))
        poly = DtPolynomial(target)
        for j, term in enumerate(entry.get("value", [])):
            b = target.basis.index(_field(term, "basis", f"entries[{i}].value[{j}]"))
            k = term.get("t_power", 0)
            dt = bool(term.get("dt", False))
            coeff = parse_rational(
                _field(term, "coeff", f"entries[{i}].value[{j}]")
            )
            poly.add_term((b, k, dt), coeff)
        entries[src] = poly
    eval_at = parse_rational(data.get("eval_at", "1"))
    return Homotopy(source, target, entries), eval_at
