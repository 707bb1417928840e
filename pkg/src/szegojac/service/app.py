"""HTTP surface over the library.

Each endpoint is a plain function taking a request model and returning
a response model; the CLI calls the same functions directly, so the
two surfaces cannot drift apart.
"""

import numpy as np
from fastapi import FastAPI, HTTPException

from ..asymptotics import edge_solutions, hyperbolic_solutions, \
    recurrence_residuals
from ..checker import check_1_to_2, check_2_to_1
from ..commutation import double_commute_add, double_commute_remove
from ..config import DEFAULT, with_overrides
from ..geronimus import direct_geronimus, inverse_geronimus
from ..jacobi import JacobiMatrix, eigenvalues_outside, m_at_edge, \
    m_function, METHOD_EXTRAP, METHOD_TAIL
from ..measures import LineMeasure
from ..opuc import VerblunskyCoeffs, weight_from_verblunsky
from ..sequences import midpoint_theta_grid
from ..szego_maps import range_membership, szego_forward, szego_inverse
from ..measures import CircleMeasure
from .models import (AsymptoticsRequest, AsymptoticsResponse,
                     CheckRequest, CheckResponse, CommuteRequest,
                     CommuteResponse, EdgeOut, EdgesRequest,
                     EdgesResponse, EigsRequest, EigsResponse,
                     GeronimusRequest, GeronimusResponse, MatrixOut,
                     MFunctionRequest, MFunctionResponse,
                     SzegoMapRequest, SzegoMapResponse)

app = FastAPI(title="szegojac", version="0.1.0")


def _matrix(m):
    return JacobiMatrix.from_arrays(m.a, m.b, tail_bound=m.tail_bound)


def _matrix_out(J):
    return MatrixOut(a=list(map(float, J.a.values)),
                     b=list(map(float, J.b.values)),
                     tail_bound=J.tail_bound)


def _tol(overrides):
    fields = {k: v for k, v in overrides.model_dump().items()
              if v is not None}
    return with_overrides(DEFAULT, **fields) if fields else DEFAULT


def _fail(exc):
    raise HTTPException(status_code=422, detail=str(exc))


@app.post("/m-function", response_model=MFunctionResponse)
def m_function_endpoint(req: MFunctionRequest):
    J = _matrix(req.matrix)
    try:
        m = m_function(J, complex(req.z_re, req.z_im))
    except ValueError as exc:
        _fail(exc)
    return MFunctionResponse(m_re=float(m.real), m_im=float(m.imag))


@app.post("/edges", response_model=EdgesResponse)
def edges_endpoint(req: EdgesRequest):
    if req.method not in (METHOD_TAIL, METHOD_EXTRAP):
        _fail(ValueError("unknown method %r" % req.method))
    J = _matrix(req.matrix)
    tol = _tol(req.tol)
    try:
        lo = m_at_edge(J, -2.0, method=req.method, tol=tol)
        hi = m_at_edge(J, +2.0, method=req.method, tol=tol)
        members = sorted(range_membership(J, tol=tol))
    except ValueError as exc:
        _fail(exc)
    return EdgesResponse(minus=EdgeOut(**lo.to_dict()),
                         plus=EdgeOut(**hi.to_dict()),
                         range_membership=members)


@app.post("/eigs", response_model=EigsResponse)
def eigs_endpoint(req: EigsRequest):
    J = _matrix(req.matrix)
    evs = eigenvalues_outside(J, tol=_tol(req.tol))
    return EigsResponse(eigenvalues=[float(E) for E in evs])


@app.post("/geronimus", response_model=GeronimusResponse)
def geronimus_endpoint(req: GeronimusRequest):
    tol = _tol(req.tol)
    try:
        if req.direction == "fwd":
            if req.alpha is None:
                raise ValueError("fwd direction needs alpha")
            J = direct_geronimus(
                VerblunskyCoeffs(np.asarray(req.alpha, dtype=float)),
                req.variant)
            return GeronimusResponse(variant=req.variant,
                                     matrix=_matrix_out(J))
        if req.direction == "inv":
            if req.matrix is None:
                raise ValueError("inv direction needs a matrix")
            inv = inverse_geronimus(_matrix(req.matrix), req.variant,
                                    tol=tol)
            return GeronimusResponse(
                variant=req.variant,
                alpha=list(map(float, inv.alpha.alpha)),
                alpha_minus1=float(inv.alpha_minus1))
        raise ValueError("direction must be fwd or inv")
    except ValueError as exc:
        _fail(exc)


@app.post("/szego-map", response_model=SzegoMapResponse)
def szego_map_endpoint(req: SzegoMapRequest):
    tol = _tol(req.tol)
    try:
        if req.direction == "fwd":
            if req.alpha is None:
                raise ValueError("fwd direction needs alpha")
            alpha = np.asarray(req.alpha, dtype=float)
            w = weight_from_verblunsky(alpha, tol.grid_size)
            mu = CircleMeasure.from_weight(w, normalize=False)
            a01 = None
            if req.variant != "e":
                a01 = (alpha[0] if alpha.size > 0 else 0.0,
                       alpha[1] if alpha.size > 1 else 0.0)
            nu = szego_forward(mu, req.variant, a01)
            return SzegoMapResponse(variant=req.variant,
                                    x=list(map(float, nu.x)),
                                    v=list(map(float, nu.v)))
        if req.direction == "inv":
            if req.x is None or req.v is None:
                raise ValueError("inv direction needs x and v tables")
            nu = LineMeasure(x=np.asarray(req.x, dtype=float),
                             v=np.asarray(req.v, dtype=float),
                             variant=req.variant)
            mu = szego_inverse(nu, req.variant)
            theta = midpoint_theta_grid(mu.grid_size)
            return SzegoMapResponse(variant=req.variant,
                                    theta=list(map(float, theta)),
                                    w=list(map(float, mu.w)))
        raise ValueError("direction must be fwd or inv")
    except ValueError as exc:
        _fail(exc)


@app.post("/commute", response_model=CommuteResponse)
def commute_endpoint(req: CommuteRequest):
    J = _matrix(req.matrix)
    tol = _tol(req.tol)
    try:
        if req.op == "add":
            if req.gamma is None:
                raise ValueError("add needs gamma")
            res = double_commute_add(J, req.E, req.gamma, tol=tol)
        elif req.op == "remove":
            res = double_commute_remove(J, req.E, tol=tol)
        else:
            raise ValueError("op must be add or remove")
    except ValueError as exc:
        _fail(exc)
    return CommuteResponse(matrix=_matrix_out(res.matrix),
                           op=res.direction, E=res.E, gamma=res.gamma,
                           weight=res.weight)


@app.post("/asymptotics", response_model=AsymptoticsResponse)
def asymptotics_endpoint(req: AsymptoticsRequest):
    J = _matrix(req.matrix)
    tol = _tol(req.tol)
    try:
        if abs(req.E) > 2.0:
            big, small = hyperbolic_solutions(J, req.E, K=req.K, tol=tol)
            fam_s, fam_b = small, big
        elif abs(abs(req.E) - 2.0) <= 1e-12:
            fam_s, fam_b = edge_solutions(J, req.E, K=req.K, tol=tol)
        else:
            raise ValueError("energy must satisfy |E| >= 2")
    except (ValueError, RuntimeError) as exc:
        _fail(exc)
    ps, pb = fam_s.psi, fam_b.psi
    n = min(ps.size, pb.size)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(pb[:n] != 0.0, ps[:n] / pb[:n], np.inf)
    rs = recurrence_residuals(J, req.E, ps)
    rb = recurrence_residuals(J, req.E, pb)
    res = np.zeros(n)
    res[1:n - 1] = np.maximum(rs[:n - 2], rb[:n - 2])
    return AsymptoticsResponse(
        E=req.E, kinds=[fam_s.kind, fam_b.kind],
        k=list(range(n)),
        psi_s=[float(x) for x in ps[:n]],
        psi_b=[float(x) for x in pb[:n]],
        ratio=[float(x) for x in ratio],
        residual=[float(x) for x in res],
        c_estimates=[fam_s.c_estimate, fam_b.c_estimate],
        residual_sup=float(max(fam_s.residual_sup, fam_b.residual_sup)))


@app.post("/check", response_model=CheckResponse)
def check_endpoint(req: CheckRequest):
    tol = _tol(req.tol)
    try:
        if req.direction == "2to1":
            if req.alpha is None or req.variant is None:
                raise ValueError("2to1 needs alpha and variant")
            rep = check_2_to_1(np.asarray(req.alpha, dtype=float),
                               req.variant, tol=tol)
        elif req.direction == "1to2":
            if req.matrix is None:
                raise ValueError("1to2 needs a matrix")
            rep = check_1_to_2(_matrix(req.matrix), tol=tol)
        else:
            raise ValueError("direction must be 1to2 or 2to1")
    except ValueError as exc:
        _fail(exc)
    return CheckResponse(report=rep.to_dict(), status=rep.status)
