"""Matrices and vectors attached to a resolution tree.

Builds the proximity matrix F, the intersection matrix A = -F^T F, the
weight, multiplicity and pullback-order vectors, the balanced divisor of
separatrices with its attachment bookkeeping, the saddle-node vectors
T, C and S, the tangency excess, and the permutation transport of all
of it.  Everything is exact integer or rational linear algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from .errors import ProximityMismatch
from .resolution import ResolutionTree, SingularityRecord


def _column(entries: Sequence) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(e)] for e in entries])


def proximity_matrix(tree: ResolutionTree) -> sp.ImmutableMatrix:
    """Lower triangular F with unit diagonal and -1 at proximity slots.

    Row k has -1 exactly at the columns of the components through the
    k-th center, following the block recursion F_k = [[F_{k-1}, 0],
    [-e_k, 1]].
    """
    n = tree.n
    F = sp.zeros(n, n)
    for comp in tree.components:
        k = comp.index - 1
        F[k, k] = 1
        for host in comp.center_hosts:
            F[k, host - 1] = -1
    return sp.ImmutableMatrix(F)


def intersection_matrix(tree: ResolutionTree) -> sp.ImmutableMatrix:
    """A from self-intersections and adjacency, checked against -F^T F."""
    n = tree.n
    A = sp.zeros(n, n)
    for comp in tree.components:
        A[comp.index - 1, comp.index - 1] = comp.self_intersection
    for edge in tree.edges:
        i, j = sorted(edge)
        A[i - 1, j - 1] = 1
        A[j - 1, i - 1] = 1
    F = proximity_matrix(tree)
    if sp.Matrix(A) != -F.T * F:
        raise ProximityMismatch(
            "intersection matrix disagrees with -F^T F:\nA=%s\n-F^T F=%s"
            % (A, -F.T * F))
    return sp.ImmutableMatrix(A)


def weights_vector(F: sp.Matrix) -> sp.Matrix:
    """rho = F^{-1} e_1, the multiplicities of the total-transform chain."""
    n = F.rows
    e1 = sp.Matrix([[1 if i == 0 else 0] for i in range(n)])
    return F.inv() * e1


def multiplicities_of_divisor(F: sp.Matrix, S_C: Sequence) -> sp.Matrix:
    """nu(C) = (F^{-1})^T S_C, the multiplicity of C at each center."""
    return F.inv().T * _column(S_C)


def pullback_orders(A: sp.Matrix, S_C: Sequence) -> sp.Matrix:
    """M_C = -A^{-1} S_C, vanishing orders of pulled-back equations."""
    return -A.inv() * _column(S_C)


# ---------------------------------------------------------------------------
# Attachment divisors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Attachment:
    """One branch of a divisor, given by where it meets the divisor.

    ``record_index`` points at the singularity whose transverse branch
    the attachment is; curvettes and other free-point branches carry
    None.  The S-vector contribution of a branch attached on E_i is
    orbit_size * e_i.
    """

    component: int
    coefficient: int  # +1 or -1
    orbit_size: int
    record_index: Optional[int]
    formal: bool
    curvette: bool
    label: str


@dataclass(frozen=True)
class AttachmentDivisor:
    """A divisor of curve branches encoded by final-model attachments."""

    branches: Tuple[Attachment, ...]

    def s_vector(self, n: int) -> List[int]:
        out = [0] * n
        for br in self.branches:
            out[br.component - 1] += br.coefficient * br.orbit_size
        return out

    def effective(self) -> bool:
        return all(br.coefficient > 0 for br in self.branches)

    def positive_part(self) -> "AttachmentDivisor":
        return AttachmentDivisor(tuple(
            br for br in self.branches if br.coefficient > 0))

    def negative_part(self) -> "AttachmentDivisor":
        """The part C_infinity, returned with positive coefficients."""
        return AttachmentDivisor(tuple(
            replace(br, coefficient=-br.coefficient)
            for br in self.branches if br.coefficient < 0))

    def __add__(self, other: "AttachmentDivisor") -> "AttachmentDivisor":
        return AttachmentDivisor(self.branches + other.branches)


def balanced_divisor(tree: ResolutionTree) -> AttachmentDivisor:
    """The minimal balanced divisor B = B_0 - B_infinity.

    B_0 holds one isolated separatrix per non-corner singularity of the
    final model (weak separatrices of non-tangent saddle-nodes enter
    with their formal flag) and 2 - val curvettes on each dicritical
    component of valence < 2; B_infinity holds val - 2 curvettes on each
    dicritical component of valence > 2.
    """
    branches: List[Attachment] = []
    for rec in tree.singularities:
        if rec.corner:
            continue
        branches.append(Attachment(
            component=rec.components[0], coefficient=1,
            orbit_size=rec.orbit_size, record_index=rec.index,
            formal=rec.formal_transverse, curvette=False,
            label="sep@%s" % rec.label))
    for comp in tree.components:
        if comp.invariant_flag:
            continue
        excess = 2 - tree.valence(comp.index)
        sign = 1 if excess > 0 else -1
        for j in range(abs(excess)):
            branches.append(Attachment(
                component=comp.index, coefficient=sign, orbit_size=1,
                record_index=None, formal=False, curvette=True,
                label="curvette%d@E%d" % (j, comp.index)))
    return AttachmentDivisor(tuple(branches))


def transverse_excess(tree: ResolutionTree, divisor: AttachmentDivisor) -> int:
    """T(C): sum of (mu_p - 1) over non-tangent saddle-nodes met by C."""
    total = 0
    for br in divisor.branches:
        if br.record_index is None:
            continue
        rec = tree.singularities[br.record_index]
        if rec.saddle_node and not rec.tangent:
            total += br.coefficient * br.orbit_size * (rec.milnor - 1)
    return total


@dataclass(frozen=True)
class SaddleNodeVectors:
    T: List[int]
    C: List[int]
    S_B: List[int]
    S_F: List[int]


def saddle_node_vectors(tree: ResolutionTree,
                        divisor: Optional[AttachmentDivisor] = None) -> SaddleNodeVectors:
    """T (tangent saddle-node), C (corner-restricted) and S_F = S_B + T.

    A tangent saddle-node contributes k - 1 on its weak component (the
    multiplicity of the foliation along the weak separatrix is k, along
    the strong one it is 1, so only the weak host sees an excess).
    """
    if divisor is None:
        divisor = balanced_divisor(tree)
    n = tree.n
    T = [0] * n
    C = [0] * n
    for rec in tree.singularities:
        if not (rec.saddle_node and rec.tangent):
            continue
        T[rec.weak_component - 1] += rec.orbit_size * (rec.milnor - 1)
        if rec.corner:
            C[rec.weak_component - 1] += rec.orbit_size * (rec.milnor - 1)
    S_B = divisor.s_vector(n)
    S_F = [s + t for s, t in zip(S_B, T)]
    return SaddleNodeVectors(T=T, C=C, S_B=S_B, S_F=S_F)


def tangency_excess_vector(F: sp.Matrix, T: Sequence) -> Tuple[sp.Matrix, sp.Rational]:
    """tau = (F^{-1})^T T and its first entry tau_0 = <rho, T>."""
    tau = F.inv().T * _column(T)
    return tau, tau[0]


# ---------------------------------------------------------------------------
# Permutation transport
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PermutedData:
    sigma: Tuple[int, ...]
    F: sp.ImmutableMatrix
    A: sp.ImmutableMatrix
    vectors: Dict[str, List]


def permute(F: sp.Matrix, A: sp.Matrix, sigma: Sequence[int],
            vectors: Optional[Dict[str, Sequence]] = None) -> PermutedData:
    """Transport F, A and any divisor vectors along a component reordering.

    ``sigma`` lists the original 1-based component indices in their new
    order; with Sigma the corresponding permutation matrix, F' =
    Sigma^T F Sigma, A' = Sigma^T A Sigma and v' = Sigma^T v.  F' is in
    general no longer lower triangular, but -F'^T F' = A' still holds
    and is asserted.
    """
    n = F.rows
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError("sigma must reorder the components 1..%d" % n)
    Sigma = sp.zeros(n, n)
    for new, old in enumerate(sigma):
        Sigma[old - 1, new] = 1
    Fp = Sigma.T * F * Sigma
    Ap = Sigma.T * A * Sigma
    if Ap != -Fp.T * Fp:
        raise ProximityMismatch("permutation transport broke A = -F^T F")
    out: Dict[str, List] = {}
    for name, vec in (vectors or {}).items():
        col = Sigma.T * _column(vec)
        out[name] = list(col)
    return PermutedData(sigma=tuple(sigma), F=sp.ImmutableMatrix(Fp),
                        A=sp.ImmutableMatrix(Ap), vectors=out)
