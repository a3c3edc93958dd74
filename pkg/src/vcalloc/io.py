"""Instance files: one JSON document holding ``job``, ``vc`` and ``params``.

::

    {"job": {"n": 3, "edges": [[0, 1, 0.2], ...], "type": 1},
     "vc": {"m": 3, "kappa": [2, 2, 1],
            "edges": [[0, 1, 0.01, 0.5], ...],     # j, j2, lambda, cost
            "trans": [0.2, 0.3, 0.0]},
     "params": {"epsilon": 0.9, "xi": 0.9, "alpha1": 0.5, "alpha2": 0.5,
                "exec_time": 1.0}}

Indices are 0-based and the job owner is provider ``m - 1``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Union

from .model import GraphJob, SystemParams, VcTopology


class InstanceFormatError(ValueError):
    pass


def _need(d: Any, key: str, where: str):
    if not isinstance(d, dict):
        raise InstanceFormatError(f"{where} must be an object")
    if key not in d:
        raise InstanceFormatError(f"missing field '{where}.{key}'" if where else
                                  f"missing field '{key}'")
    return d[key]


def instance_from_dict(doc: dict) -> tuple[GraphJob, VcTopology, SystemParams]:
    try:
        j = _need(doc, "job", "")
        v = _need(doc, "vc", "")
        p = _need(doc, "params", "")
        n = int(_need(j, "n", "job"))
        edges = [tuple(e) for e in _need(j, "edges", "job")]
        if any(len(e) != 3 for e in edges):
            raise InstanceFormatError("job.edges rows must be [i, i2, omega]")
        job = GraphJob(n, edges, j.get("type"))

        m = int(_need(v, "m", "vc"))
        kappa = [int(k) for k in _need(v, "kappa", "vc")]
        trans = [float(t) for t in _need(v, "trans", "vc")]
        rows = [tuple(e) for e in _need(v, "edges", "vc")]
        if len(kappa) != m or len(trans) != m:
            raise InstanceFormatError(f"vc.kappa and vc.trans must have m={m} entries")
        for e in rows:
            if len(e) != 4:
                raise InstanceFormatError("vc.edges rows must be [j, j2, lambda, cost]")
            if not (0 <= int(e[0]) < m and 0 <= int(e[1]) < m):
                raise InstanceFormatError(f"vc edge {list(e)} references unknown SP")
        vc = VcTopology.from_edges(kappa, rows, trans)

        params = SystemParams(
            epsilon=float(_need(p, "epsilon", "params")),
            xi=float(_need(p, "xi", "params")),
            alpha1=float(_need(p, "alpha1", "params")),
            exec_time=float(_need(p, "exec_time", "params")),
            alpha2=float(p["alpha2"]) if "alpha2" in p else None,
        )
    except InstanceFormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(str(exc)) from exc
    return job, vc, params


def instance_to_dict(job: GraphJob, vc: VcTopology, params: SystemParams,
                     seed: Optional[int] = None) -> dict:
    doc = {
        "job": {"n": job.n, "edges": [list(e) for e in job.edge_list], "type": job.job_type},
        "vc": {"m": vc.m, "kappa": list(vc.kappa),
               "edges": [list(e) for e in vc.edge_rows()],
               "trans": [float(t) for t in vc.trans]},
        "params": {"epsilon": params.epsilon, "xi": params.xi, "alpha1": params.alpha1,
                   "alpha2": params.alpha2, "exec_time": params.exec_time},
    }
    if seed is not None:
        doc["seed"] = seed
    return doc


def load_instance(path: Union[str, Path]):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: not valid JSON ({exc})") from exc
    return instance_from_dict(doc)


def dump_instance(path: Union[str, Path], job, vc, params, seed=None) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(job, vc, params, seed), indent=2) + "\n")
