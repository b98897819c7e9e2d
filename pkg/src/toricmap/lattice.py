"""Exact integer and rational linear algebra, rational cones, and fans.

Matrices are plain lists of int rows (IntMatrix); rational work uses Fractions.
Dimensions stay at desk scale, so the algorithms favor clarity and exactness
over asymptotics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

IntMatrix = list  # list[list[int]]


class LatticeError(ValueError):
    pass


# -- integer matrices ----------------------------------------------------------


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    assert not A or not B or len(A[0]) == len(B), "matrix shape mismatch"
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def mat_vec(A, v):
    assert all(len(row) == len(v) for row in A), "matrix/vector shape mismatch"
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def smith_normal_form(A):
    """Return (U, D, V) with U*A*V = D diagonal, U, V unimodular, and each
    diagonal entry dividing the next."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    assert all(len(row) == n for row in D), "ragged matrix"
    U = identity_matrix(m)
    V = identity_matrix(n)

    def row_op(i, j, q):  # row_i -= q*row_j
        D[i] = [a - q * b for a, b in zip(D[i], D[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q*col_j
        for row in D:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        # pivot: a nonzero entry of smallest magnitude in the working block
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] != 0 and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    row_op(i, t, q)
                    if D[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    col_op(j, t, q)
                    if D[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # divisor chain: pivot must divide the rest of the block
        fixed = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i][j] % D[t][t]:
                    row_op(t, i, -1)  # add row i to row t, then restart cleanup
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, D, V


def diagonal_of(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def hermite_row_basis(rows):
    """Row-style Hermite basis of the lattice the rows generate (no zero rows,
    positive pivots, entries above each pivot reduced)."""
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    n = len(work[0])
    basis = []
    col = 0
    while work and col < n:
        sub = [r for r in work if r[col]]
        if not sub:
            col += 1
            continue
        while True:
            sub.sort(key=lambda r: abs(r[col]))
            p = sub[0]
            done = True
            for r in sub[1:]:
                q = r[col] // p[col]
                for k in range(n):
                    r[k] -= q * p[k]
                if r[col]:
                    done = False
            # rows cleared in this column stay in work for later columns
            sub = [p] + [r for r in sub[1:] if r[col]]
            if done:
                break
        if p[col] < 0:
            for k in range(n):
                p[k] = -p[k]
        basis.append(p)
        work = [r for r in work if r is not p and any(r)]
        col += 1
    # reduce entries above pivots
    for i in reversed(range(len(basis))):
        pc = next(k for k in range(n) if basis[i][k])
        for j in range(i):
            q = basis[j][pc] // basis[i][pc]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[i])]
    return basis


def integer_kernel(A, torsion_orders=(), ncols=None):
    """Basis of the kernel of v -> A*v into Z^k x prod Z/m_i.

    The last len(torsion_orders) rows of A are read modulo the given orders;
    the result is a Hermite basis of the kernel lattice in Z^cols.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    tr = len(torsion_orders)
    assert tr <= m, "more torsion orders than rows"
    ext = []
    for i, row in enumerate(A):
        extra = [0] * tr
        if i >= m - tr:
            k = i - (m - tr)
            assert torsion_orders[k] >= 1, "torsion orders are positive"
            extra[k] = torsion_orders[k]
        ext.append(list(row) + extra)
    if not ext:
        return [list(r) for r in identity_matrix(n)]
    U, D, V = smith_normal_form(ext)
    rank = sum(1 for d in diagonal_of(D) if d != 0)
    cols = len(ext[0])
    gens = []
    for j in range(rank, cols):
        gens.append([V[i][j] for i in range(n)])
    return hermite_row_basis(gens)


def cokernel_data(A):
    """Present Z^rows / column-space(A): returns (free_rows, torsion) where
    free_rows are integer rows and torsion is a list of (order, row)."""
    m = len(A)
    U, D, V = smith_normal_form(A)
    diag = diagonal_of(D)
    free_rows, torsion = [], []
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            free_rows.append(list(U[i]))
        elif d >= 2:
            torsion.append((d, [a % d for a in U[i]]))
    return free_rows, torsion


def primitive_vector(v):
    g = 0
    for a in v:
        g = math.gcd(g, a)
    if g == 0:
        raise LatticeError("zero vector has no primitive form")
    return tuple(a // g for a in v)


def is_primitive(v):
    g = 0
    for a in v:
        g = math.gcd(g, abs(a))
    return g == 1


# -- rational linear algebra ---------------------------------------------------


def _rref(rows):
    """Reduced row echelon form over Q; returns (rows, pivot_columns)."""
    M = [[Fraction(a) for a in row] for row in rows]
    if not M:
        return [], []
    n = len(M[0])
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        piv = M[r][c]
        M[r] = [a / piv for a in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rational_rank(rows):
    return len(_rref(rows)[0])


def null_space(rows, n=None):
    """Basis of {x in Q^n : rows . x = 0}."""
    if n is None:
        assert rows, "need explicit dimension for empty systems"
        n = len(rows[0])
    R, pivots = _rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][fc]
        basis.append(v)
    return basis


def solve_linear(A, b):
    """One rational solution x of A x = b, or None."""
    if not A:
        return [] if all(x == 0 for x in b) else None
    n = len(A[0])
    aug = [[Fraction(a) for a in row] + [Fraction(bb)] for row, bb in zip(A, b)]
    R, pivots = _rref(aug)
    for row in R:
        if all(a == 0 for a in row[:-1]) and row[-1] != 0:
            return None
    x = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        if pc == n:
            return None
        x[pc] = R[i][-1]
    return x


def _to_primitive_int(v):
    """Scale a rational vector to coprime integers keeping direction."""
    den = 1
    for a in v:
        den = den * a.denominator // math.gcd(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = math.gcd(g, abs(a))
    assert g > 0, "zero vector"
    return tuple(a // g for a in ints)


# -- cone geometry --------------------------------------------------------------


class _ConeGeometry:
    """H-description of a rational cone from (possibly redundant) generators."""

    def __init__(self, gens, dim):
        self.dim = dim
        self.gens = [tuple(Fraction(a) for a in g) for g in gens]
        assert all(len(g) == dim for g in self.gens), "generator dimension mismatch"
        span_rows = [list(g) for g in self.gens if any(a != 0 for a in g)]
        self.span_basis, _ = _rref(span_rows)
        self.rank = len(self.span_basis)
        # equalities: basis of the orthogonal complement of the span
        self.equalities = [
            _to_primitive_int(v) for v in null_space(self.span_basis or [[Fraction(0)] * dim], dim)
        ] if self.rank < dim else []
        self.facets = self._facet_normals()

    def _coords(self, v):
        """Coordinates of v in the span basis, or None if v is off the span."""
        if self.rank == 0:
            return [] if all(a == 0 for a in v) else None
        B = transpose(self.span_basis)
        return solve_linear(B, list(v))

    def _facet_normals(self):
        e = self.rank
        if e == 0:
            return []
        coords = [self._coords(g) for g in self.gens]
        assert all(c is not None for c in coords)
        normals = set()
        for subset in itertools.combinations(range(len(self.gens)), e - 1):
            rows = [coords[i] for i in subset]
            null = null_space(rows or [[Fraction(0)] * e], e)
            if len(null) != 1:
                continue
            n = null[0]
            pos = any(sum(a * b for a, b in zip(n, c)) > 0 for c in coords)
            neg = any(sum(a * b for a, b in zip(n, c)) < 0 for c in coords)
            if pos and neg:
                continue
            if neg:
                n = [-a for a in n]
            normals.add(_to_primitive_int(self._lift(n)))
        return sorted(normals)

    def _lift(self, w):
        """Ambient functional agreeing with w on the span."""
        sol = solve_linear(self.span_basis, list(w))
        assert sol is not None, "span basis solve failed"
        return sol

    def is_strictly_convex(self):
        if self.rank == 0:
            return True
        coords = [self._coords(n) for n in self.facets]
        return rational_rank([c for c in coords if c is not None]) == self.rank

    def contains(self, v):
        v = [Fraction(a) for a in v]
        for eq in self.equalities:
            if sum(a * b for a, b in zip(eq, v)) != 0:
                return False
        for n in self.facets:
            if sum(a * b for a, b in zip(n, v)) < 0:
                return False
        return True

    def active_normals(self, points):
        out = []
        for n in self.facets:
            if all(sum(a * b for a, b in zip(n, p)) == 0 for p in points):
                out.append(n)
        return out

    def face_generator_indices(self, points):
        """Indices of generators on the minimal face containing the points."""
        active = self.active_normals(points)
        out = []
        for i, g in enumerate(self.gens):
            if all(sum(a * b for a, b in zip(n, g)) == 0 for n in active):
                out.append(i)
        return out

    def generator_is_redundant(self, i):
        others = [g for j, g in enumerate(self.gens) if j != i]
        if not others:
            return all(a == 0 for a in self.gens[i])
        return _ConeGeometry(others, self.dim).contains(self.gens[i])


def _feasible(equalities, weak, strict_at_one):
    """Exact Fourier-Motzkin feasibility: eq.x = 0, weak.x >= 0, s.x >= 1."""
    cons = []  # rows (coeffs..., rhs) meaning coeffs.x >= rhs
    for e in equalities:
        cons.append([Fraction(a) for a in e] + [Fraction(0)])
        cons.append([Fraction(-a) for a in e] + [Fraction(0)])
    for w in weak:
        cons.append([Fraction(a) for a in w] + [Fraction(0)])
    for s in strict_at_one:
        cons.append([Fraction(a) for a in s] + [Fraction(1)])
    n = len(cons[0]) - 1 if cons else 0
    for var in range(n):
        pos = [c for c in cons if c[var] > 0]
        neg = [c for c in cons if c[var] < 0]
        rest = [c for c in cons if c[var] == 0]
        new = list(rest)
        for p in pos:
            for q in neg:
                row = [pa * (-q[var]) + qa * p[var] for pa, qa in zip(p, q)]
                row[var] = Fraction(0)
                new.append(row)
        cons = new
    return all(c[-1] <= 0 for c in cons)


# -- fans ------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Cone:
    """A cone of a fan, named by the sorted indices of its generator rays."""

    rays: tuple

    def __init__(self, rays):
        object.__setattr__(self, "rays", tuple(sorted(set(int(r) for r in rays))))

    def dim_hint(self):
        return len(self.rays)


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """Finitely generated abelian group: free rank plus divisor-chain torsion."""

    free_rank: int
    torsion_orders: tuple

    def __post_init__(self):
        assert self.free_rank >= 0
        for a, b in zip(self.torsion_orders, self.torsion_orders[1:]):
            assert b % a == 0, "torsion orders must form a divisor chain"
        assert all(m >= 2 for m in self.torsion_orders)


class Fan:
    """A rational polyhedral fan given by primitive rays and maximal cones.

    Rays that do not rationally span the ambient lattice are complemented by
    virtual rays (computed from the Smith normal form of the ray matrix);
    virtual rays belong to no cone.
    """

    def __init__(self, lattice_dim, rays, maximal_cones, validate=True):
        self.lattice_dim = int(lattice_dim)
        self.rays = tuple(tuple(int(a) for a in r) for r in rays)
        for r in self.rays:
            if len(r) != self.lattice_dim:
                raise LatticeError("ray dimension mismatch")
            if not any(r):
                raise LatticeError("zero ray")
            if not is_primitive(r):
                raise LatticeError("ray %r is not primitive" % (r,))
        if len(set(self.rays)) != len(self.rays):
            raise LatticeError("duplicate rays")
        cones = []
        for c in maximal_cones:
            cone = c if isinstance(c, Cone) else Cone(c)
            for i in cone.rays:
                if not 0 <= i < len(self.rays):
                    raise LatticeError("cone references unknown ray %d" % i)
            cones.append(cone)
        self.maximal_cones = tuple(cones)
        self.virtual_rays = self._complement_rays()
        self._geometry = {}
        if validate:
            self._validate()

    # virtual rays: lift a standard complement through the SNF of the ray matrix
    def _complement_rays(self):
        if not self.rays:
            cols = []
        else:
            cols = transpose([list(r) for r in self.rays])
        if not cols:
            return tuple(tuple(row) for row in identity_matrix(self.lattice_dim))
        U, D, V = smith_normal_form(cols)
        rank = sum(1 for d in diagonal_of(D) if d != 0)
        if rank == self.lattice_dim:
            return ()
        Uinv = _int_inverse(U)
        out = []
        for j in range(rank, self.lattice_dim):
            out.append(primitive_vector([Uinv[i][j] for i in range(self.lattice_dim)]))
        return tuple(out)

    @property
    def all_rays(self):
        """Fan rays followed by virtual rays; Cox variables index this list."""
        return self.rays + self.virtual_rays

    def geometry(self, cone):
        key = cone.rays
        if key not in self._geometry:
            self._geometry[key] = _ConeGeometry(
                [self.rays[i] for i in key], self.lattice_dim
            )
        return self._geometry[key]

    def _validate(self):
        for cone in self.maximal_cones:
            geom = self.geometry(cone)
            if not geom.is_strictly_convex():
                raise LatticeError("cone %r is not strictly convex" % (cone.rays,))
            for pos, i in enumerate(cone.rays):
                if geom.generator_is_redundant(pos):
                    raise LatticeError("ray %d is not extremal in cone %r" % (i, cone.rays))
        for ca, cb in itertools.combinations(self.maximal_cones, 2):
            if set(ca.rays) <= set(cb.rays) or set(cb.rays) <= set(ca.rays):
                raise LatticeError(
                    "cone %r is contained in cone %r" % (ca.rays, cb.rays)
                )
            self._check_common_face(ca, cb)

    def _check_common_face(self, ca, cb):
        common = sorted(set(ca.rays) & set(cb.rays))
        pts = [self.rays[i] for i in common]
        ga, gb = self.geometry(ca), self.geometry(cb)
        fa = {ca.rays[i] for i in ga.face_generator_indices(pts)} if pts else set()
        fb = {cb.rays[i] for i in gb.face_generator_indices(pts)} if pts else set()
        if pts and (fa != set(common) or fb != set(common)):
            raise LatticeError(
                "cones %r and %r do not meet along a common face" % (ca.rays, cb.rays)
            )
        # no point of both cones may violate a facet active on the common face
        active = ga.active_normals(pts) if pts else [list(n) for n in ga.facets]
        eqs = list(ga.equalities) + list(gb.equalities)
        weak = [list(n) for n in ga.facets] + [list(n) for n in gb.facets]
        for n in active:
            if _feasible(eqs, weak, [list(n)]):
                raise LatticeError(
                    "cones %r and %r overlap beyond their common face" % (ca.rays, cb.rays)
                )

    def contains_as_face(self, cone):
        """Check that the ray set really cuts out a face of some maximal cone."""
        return minimal_containing_cone(self, cone.rays) == cone

    def cone_smooth(self, cone):
        """A cone is smooth when its rays extend to a lattice basis."""
        if not cone.rays:
            return True
        cols = transpose([list(self.rays[i]) for i in cone.rays])
        U, D, V = smith_normal_form(cols)
        diag = [d for d in diagonal_of(D) if d != 0]
        return len(diag) == len(cone.rays) and all(d == 1 for d in diag)

    def all_faces(self):
        """Every face of every maximal cone, as Cone objects (with the origin)."""
        faces = {Cone(())}
        for cone in self.maximal_cones:
            geom = self.geometry(cone)
            for size in range(len(cone.rays) + 1):
                for subset in itertools.combinations(range(len(cone.rays)), size):
                    pts = [self.rays[cone.rays[i]] for i in subset]
                    if not pts:
                        continue
                    idx = geom.face_generator_indices(pts)
                    faces.add(Cone(tuple(cone.rays[i] for i in idx)))
        return sorted(faces)

    def minimal_singular_cones(self):
        singular = [c for c in self.all_faces() if not self.cone_smooth(c)]
        out = []
        for c in singular:
            if not any(set(o.rays) < set(c.rays) for o in singular if o != c):
                out.append(c)
        return out


def _int_inverse(U):
    """Inverse of a unimodular integer matrix, as integers."""
    n = len(U)
    aug = [[Fraction(U[i][j]) for j in range(n)] for i in range(n)]
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for c in range(n):
        pr = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[pr] = aug[pr], aug[c]
        inv[c], inv[pr] = inv[pr], inv[c]
        piv = aug[c][c]
        aug[c] = [a / piv for a in aug[c]]
        inv[c] = [a / piv for a in inv[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
                inv[i] = [a - f * b for a, b in zip(inv[i], inv[c])]
    out = []
    for row in inv:
        assert all(a.denominator == 1 for a in row), "matrix was not unimodular"
        out.append([int(a) for a in row])
    return out


def minimal_containing_cone(fan, ray_subset):
    """Smallest cone of the fan containing the given rays, or None."""
    idx = sorted(set(int(i) for i in ray_subset))
    for i in idx:
        if not 0 <= i < len(fan.rays):
            raise LatticeError("unknown ray index %d" % i)
    if not idx:
        return Cone(())
    pts = [fan.rays[i] for i in idx]
    for cone in fan.maximal_cones:
        if not set(idx) <= set(cone.rays):
            continue
        geom = fan.geometry(cone)
        face = geom.face_generator_indices(pts)
        return Cone(tuple(cone.rays[i] for i in face))
    return None


def support_membership(fan, v):
    """Minimal cone of the fan whose support contains v, or None."""
    v = [Fraction(a) for a in v]
    assert len(v) == fan.lattice_dim, "vector dimension mismatch"
    if all(a == 0 for a in v):
        return Cone(())
    for cone in fan.maximal_cones:
        geom = fan.geometry(cone)
        if geom.contains(v):
            face = geom.face_generator_indices([v])
            return Cone(tuple(cone.rays[i] for i in face))
    return None


@dataclass
class StarQuotient:
    """Star of a cone with the induced fan on the quotient lattice.

    L maps ray-space vectors (one coordinate per Cox variable, virtual rays
    included) to the quotient lattice: column i is the image of ray i.
    """

    sigma: Cone
    star_cones: tuple
    quotient_fan: Fan
    L: IntMatrix
    projection: IntMatrix
    quotient_ray_index: dict  # fan ray index -> quotient ray index (or None)
    star_image_cones: dict  # star cone -> Cone of the quotient fan


def star_and_quotient_fan(fan, sigma):
    """Star of sigma and the quotient fan in N / span(sigma)."""
    if minimal_containing_cone(fan, sigma.rays) != sigma:
        raise LatticeError("%r is not a cone of the fan" % (sigma.rays,))
    d = fan.lattice_dim
    if sigma.rays:
        cols = transpose([list(fan.rays[i]) for i in sigma.rays])
        U, D, V = smith_normal_form(cols)
        rank = sum(1 for x in diagonal_of(D) if x != 0)
        proj = [U[i] for i in range(rank, d)]
    else:
        proj = identity_matrix(d)
    qdim = len(proj)
    star = tuple(c for c in fan.maximal_cones if set(sigma.rays) <= set(c.rays))
    if not star:
        raise LatticeError("empty star")  # unreachable for faces of the fan
    images = {}
    for i, ray in enumerate(fan.rays):
        w = mat_vec(proj, list(ray)) if qdim else []
        images[i] = tuple(w)
    qrays = []
    qindex = {}
    for cone in star:
        for i in cone.rays:
            w = images[i]
            if not any(w):
                qindex[i] = None
                continue
            p = primitive_vector(w)
            if p not in qrays:
                qrays.append(p)
            qindex[i] = qrays.index(p)
    qcones = []
    image_cones = {}
    for cone in star:
        q = Cone(tuple(qindex[i] for i in cone.rays if qindex.get(i) is not None))
        qcones.append(q)
        image_cones[cone] = q
    quotient = Fan(qdim, qrays, qcones, validate=False)
    L = [[0] * len(fan.all_rays) for _ in range(qdim)]
    for j, ray in enumerate(fan.all_rays):
        w = mat_vec(proj, list(ray)) if qdim else []
        for k in range(qdim):
            L[k][j] = w[k]
    return StarQuotient(sigma, star, quotient, L, proj, qindex, image_cones)
