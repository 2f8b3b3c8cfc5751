"""Handlers shared by the HTTP routes and the in-process CLI client.

Every handler takes a request model and returns a response model; core
errors propagate and are translated at the edge (HTTP status or exit code).
"""
from __future__ import annotations

from .. import coloring, graphs, model, protocol, region
from ..entropy import conditional_entropy_of_f, graph_entropy
from ..graphs import Graph
from . import schemas


def _instance(doc: schemas.InstanceDoc) -> model.ProblemInstance:
    return model.instance_from_mapping(doc.model_dump())


def _scheme(doc: schemas.SchemeDoc, inst: model.ProblemInstance) -> protocol.Scheme:
    return protocol.scheme_from_mapping(doc.model_dump(), inst)


def _render(label) -> str:
    return graphs._render_label(label)


def _graph_doc(g: Graph, name: str) -> schemas.GraphDoc:
    return schemas.GraphDoc(
        name=name,
        vertices=[_render(v) for v in g.vertices],
        edges=[
            [_render(g.vertices[i]), _render(g.vertices[j])] for i, j in sorted(g.edges)
        ],
        edge_list=graphs.edge_list_text(g),
        dot=graphs.to_dot(g, name),
    )


def graphs_report(req: schemas.GraphsRequest) -> schemas.GraphsResponse:
    inst = _instance(req.instance)
    gxy = graphs.f_rook_graph(inst)
    gx, gy = graphs.confusability_graphs(inst)
    return schemas.GraphsResponse(
        f_rook=_graph_doc(gxy, "f_rook"),
        confusability_x=_graph_doc(gx, "confusability_x"),
        confusability_y=_graph_doc(gy, "confusability_y"),
        support_size=len(model.support(inst)),
    )


def _target_prob_graph(inst: model.ProblemInstance, target: str) -> graphs.ProbabilisticGraph:
    if target == "joint":
        return graphs.f_rook_prob_graph(inst)
    pgx, pgy = graphs.confusability_prob_graphs(inst)
    return pgx if target == "x" else pgy


def entropy_report(req: schemas.EntropyRequest) -> schemas.EntropyResponse:
    inst = _instance(req.instance)
    pg = _target_prob_graph(inst, req.target)
    if req.kind == "chromatic":
        result = coloring.chromatic_entropy_product(
            pg, req.n, max_vertices=req.cap_vertices
        )
        witness = schemas.WitnessDoc(
            vertices=[_render(v) for v in result.graph.vertices],
            colors=list(result.coloring.assignment),
        )
        return schemas.EntropyResponse(
            kind=req.kind,
            target=req.target,
            n=req.n,
            bits_per_symbol=result.value_bits_per_symbol,
            witness=witness,
        )
    solved = graph_entropy(
        pg,
        tol=req.solver.tol,
        max_iter=req.solver.max_iter,
        record_trace=req.record_trace,
    )
    return schemas.EntropyResponse(
        kind=req.kind,
        target=req.target,
        n=1,
        bits_per_symbol=solved.value_bits,
        converged=solved.converged,
        iterations=solved.iterations,
        trace=list(solved.trace) if req.record_trace else None,
    )


def _triple_doc(t: region.RateTriple) -> schemas.RateTripleDoc:
    return schemas.RateTripleDoc(r_a=t.r_a, r_b=t.r_b, r_c=t.r_c)


def bounds_report(req: schemas.BoundsRequest) -> schemas.BoundsResponse:
    inst = _instance(req.instance)
    report = region.rate_region_report(
        inst, frontier_ns=(), tol=req.solver.tol, max_iter=req.solver.max_iter
    )
    return schemas.BoundsResponse(
        corner_i1=_triple_doc(report.corner_i1),
        corner_i2=_triple_doc(report.corner_i2),
        corner_o=_triple_doc(report.corner_o),
        tight=report.tight,
    )


def region_report(req: schemas.RegionRequest) -> schemas.RegionResponse:
    inst = _instance(req.instance)
    report = region.rate_region_report(
        inst, frontier_ns=tuple(req.ns), tol=req.solver.tol, max_iter=req.solver.max_iter
    )
    return schemas.RegionResponse(
        corner_i1=_triple_doc(report.corner_i1),
        corner_i2=_triple_doc(report.corner_i2),
        corner_o=_triple_doc(report.corner_o),
        tight=report.tight,
        frontiers={
            str(n): [_triple_doc(t) for t in pts] for n, pts in report.frontiers.items()
        },
    )


def verify_report(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
    inst = _instance(req.instance)
    scheme = _scheme(req.scheme, inst)
    check = protocol.verify_zero_error(inst, scheme)
    violation = None
    if check.violation is not None:
        violation = [list(check.violation[0]), list(check.violation[1])]
    return schemas.VerifyResponse(
        zero_error=check.ok, violation=violation, detail=check.detail
    )


def simulate_report(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    inst = _instance(req.instance)
    scheme = _scheme(req.scheme, inst)
    check = protocol.verify_zero_error(inst, scheme)
    exact = protocol.measure_rates(inst, scheme, mode="exact")
    simulated = None
    if req.blocks > 0:
        simulated = protocol.measure_rates(
            inst, scheme, mode="simulate", blocks=req.blocks, seed=req.seed
        )
    if check.ok:
        relay = protocol.relay_computability(inst, scheme)
        relay_computable, relay_residual = relay.computable, relay.residual_bits
    else:
        relay_computable = False
        relay_residual = entropy.conditional_entropy_of_f(
            inst, scheme.n, scheme.enc_a, scheme.enc_b
        )
    return schemas.SimulateResponse(
        zero_error=check.ok,
        exact=_triple_doc(exact.triple),
        exact_fractions=list(exact.exact_fractions or ()),
        simulated=_triple_doc(simulated.triple) if simulated else None,
        stderr=_triple_doc(simulated.stderr) if simulated else None,
        blocks=simulated.blocks if simulated else None,
        seed=simulated.seed if simulated else None,
        relay_computable=relay_computable,
        relay_residual_bits=relay_residual,
    )


def relay_report(req: schemas.RelayRequest) -> schemas.RelayResponse:
    inst = _instance(req.instance)
    scheme = _scheme(req.scheme, inst)
    check = protocol.relay_computability(inst, scheme)
    return schemas.RelayResponse(
        computable=check.computable,
        residual_bits=check.residual_bits,
        ambiguous_pairs=[list(p) for p in check.ambiguous_pairs],
    )
