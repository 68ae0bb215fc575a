"""Text formats: lattices (JSON with covers and optional negation tables),
approximation spaces (JSON with universe and blocks), and DOT export."""

from __future__ import annotations

import json
from typing import Optional

from .algebra import AlgebraStructure, classify, with_tables
from .errors import NotALattice, NotAPartition, TableMismatch
from .lattice import FiniteLattice, build_lattice
from .roughset import ApproximationSpace


def lattice_document(A: AlgebraStructure | FiniteLattice, name: Optional[str] = None) -> dict:
    if isinstance(A, FiniteLattice):
        A = AlgebraStructure(A)
    L = A.lattice
    doc = {"elements": list(L.names), "covers": [[L.names[a], L.names[b]] for a, b in L.covers]}
    if A.pseudo_neg is not None:
        doc["neg_pseudo"] = [L.names[x] for x in A.pseudo_neg]
    if A.dual_neg is not None:
        doc["neg_dual"] = [L.names[x] for x in A.dual_neg]
    if name or A.name:
        doc["name"] = name or A.name
    return doc


def dump_lattice(A: AlgebraStructure | FiniteLattice, name: Optional[str] = None) -> str:
    return json.dumps(lattice_document(A, name), indent=1, ensure_ascii=False) + "\n"


def load_lattice(text: str) -> AlgebraStructure:
    """Parse the lattice format.  Given negation tables are checked against the order;
    a missing table is derived from the order where it exists."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise NotALattice(f"not JSON: {e}") from None
    if not isinstance(doc, dict) or "elements" not in doc or "covers" not in doc:
        raise NotALattice("lattice document needs 'elements' and 'covers'")
    elements = [str(x) for x in doc["elements"]]
    if len(set(elements)) != len(elements):
        raise NotALattice("duplicate element names")
    covers = doc["covers"]
    if not all(isinstance(c, list) and len(c) == 2 for c in covers):
        raise NotALattice("each cover must be a [lower, upper] pair")
    L = build_lattice([(a, b) for a, b in covers], elements)
    name = str(doc.get("name", ""))

    def table(key):
        if key not in doc:
            return None
        names = [str(x) for x in doc[key]]
        if len(names) != L.size:
            raise TableMismatch(f"{key} needs one entry per element")
        try:
            return tuple(L.index(x) for x in names)
        except (KeyError, ValueError):
            raise TableMismatch(f"{key} mentions an unknown element") from None

    pseudo, dual = table("neg_pseudo"), table("neg_dual")
    if pseudo is None and dual is None:
        return classify(L, name)
    checked = with_tables(L, pseudo, dual, name)
    # keep the order-derived table for a negation the file leaves out
    base = classify(L, name)
    return checked if (pseudo is not None and dual is not None) else base.restrict(
        pseudo=pseudo is not None or base.pseudo_neg is not None,
        dual=dual is not None or base.dual_neg is not None,
    )


def to_dot(A: AlgebraStructure | FiniteLattice, name: str = "lattice") -> str:
    """DOT digraph: one node per element, one edge per cover (lower -> upper)."""
    if isinstance(A, FiniteLattice):
        A = AlgebraStructure(A)
    L = A.lattice
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=BT;"]
    for i, n in enumerate(L.names):
        tip = []
        if A.pseudo_neg is not None:
            tip.append(f"~{n} = {L.names[A.pseudo_neg[i]]}")
        if A.dual_neg is not None:
            tip.append(f"!{n} = {L.names[A.dual_neg[i]]}")
        attrs = f"label={json.dumps(n, ensure_ascii=False)}"
        if tip:
            attrs += f", tooltip={json.dumps('; '.join(tip), ensure_ascii=False)}"
        lines.append(f"  n{i} [{attrs}];")
    for a, b in L.covers:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_space(space: ApproximationSpace) -> str:
    doc = {"universe": list(space.universe), "blocks": [[space.universe[i] for i in b] for b in space.blocks]}
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def load_space(text: str) -> ApproximationSpace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise NotAPartition(f"not JSON: {e}") from None
    if not isinstance(doc, dict) or "universe" not in doc or "blocks" not in doc:
        raise NotAPartition("space document needs 'universe' and 'blocks'")
    return ApproximationSpace.from_blocks(doc["universe"], doc["blocks"])
