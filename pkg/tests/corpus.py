"""Shared corpus of foliation germs used by the property suites.

Each entry carries the 1-form coefficients, optionally the product
equation of all (known) separatrices, and whether the germ is a
hamiltonian (exact differential of the separatrix equation).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import sympy as sp

from foliations.algebra import x, y


@dataclass(frozen=True)
class CorpusGerm:
    name: str
    p: sp.Expr
    q: sp.Expr
    separatrix: Optional[sp.Expr] = None
    hamiltonian: bool = False

    @property
    def pq(self) -> Tuple[sp.Expr, sp.Expr]:
        return (self.p, self.q)


def _ham(name: str, f) -> CorpusGerm:
    f = sp.expand(f)
    return CorpusGerm(name=name, p=sp.expand(sp.diff(f, x)),
                      q=sp.expand(sp.diff(f, y)), separatrix=f,
                      hamiltonian=True)


def _germ(name: str, p, q, separatrix=None) -> CorpusGerm:
    return CorpusGerm(name=name, p=sp.expand(p), q=sp.expand(q),
                      separatrix=(sp.expand(separatrix)
                                  if separatrix is not None else None))


CORPUS = [
    # hamiltonians of products of 2 to 4 branches
    _ham("h-2lines", x * y),
    _ham("h-3lines", x * y * (x + y)),
    _ham("h-4lines", x * y * (x - y) * (x + y)),
    _ham("h-3lines-b", (y - x) * (y + x) * (y - 2 * x)),
    _ham("h-cusp", y**2 - x**3),
    _ham("h-cusp-line", (y**2 - x**3) * (y - x)),
    _ham("h-cusp-y", (y**2 - x**3) * y),
    _ham("h-cusp-x", (y**2 - x**3) * x),
    _ham("h-e8", y**2 - x**5),
    _ham("h-e8-y", (y**2 - x**5) * y),
    _ham("h-tacnode", (y - x**2) * (y + x**2)),
    _ham("h-par-line", y * (y - x**2)),
    _ham("h-par-pair", (y - x**2) * (y - 2 * x**2)),
    _ham("h-cusp32", y**3 - x**2),
    _ham("h-cusp43", y**3 - x**4),
    _ham("h-quartic", y**4 - x**3),
    # worked examples with published resolution data
    _germ("example-dicritical-sn", (x * y + x**2 * y - x**2 - y**2) * y,
          -(x - 1) * x**3),
    _germ("example-corner-sn", y, -(2 * x + y**2), separatrix=y),
    _germ("example-tangent-sn", y, y - x, separatrix=y),
    # radial and other dicritical germs
    _germ("radial", -y, x),
    _germ("node-resonant-2", -2 * y, x),
    _germ("node-resonant-3", -3 * y, x),
    _germ("dicritical-tangency", x**3 - y**2, x * y),
    # saddle-node normal forms x^k dy - y (1 + lambda x^(k-1)) dx
    _germ("sn-k2-l0", -y, x**2, separatrix=x * y),
    _germ("sn-k2-l1", -y * (1 + x), x**2, separatrix=x * y),
    _germ("sn-k3-l1", -y * (1 + x**2), x**3, separatrix=x * y),
    _germ("sn-k3-lneg", -y * (1 - sp.Rational(1, 2) * x**2), x**3,
          separatrix=x * y),
    _germ("sn-k4-l1", -y * (1 + x**3), x**4, separatrix=x * y),
    # fixed low-degree perturbations
    _germ("pert-1", y + x**2 + x * y, x - y**2),
    _germ("pert-2", y**2 - x**2 + x**3, x * y + y**3),
    _germ("pert-3", 2 * x * y + y**3, x**2 - y**2 + x**3),
    _germ("pert-4", x**2 - y**3, x * y + x**3),
    _germ("pert-5", y + x**3, x + y**3),
]

assert len(CORPUS) >= 30

BY_NAME = {g.name: g for g in CORPUS}
