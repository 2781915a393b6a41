import copy
import json

import pytest

from surfcross.families import complete_graph
from surfcross.graph import Surface, from_document, sha256, to_document
from surfcross.solver import crossing_number
from surfcross.verify import verify_certificate


@pytest.fixture(scope="module")
def k5_cert():
    return crossing_number(complete_graph(5), Surface(True, 0)).certificate.to_dict()


def _rehash(cert):
    cert["graph_sha"] = sha256(from_document(cert["graph"]))
    return cert


def test_accepts_solver_output(k5_cert):
    verdict = verify_certificate(k5_cert)
    assert verdict and verdict.euler_genus == 0 and verdict.orientable


def test_accepts_json_text(k5_cert):
    assert verify_certificate(json.dumps(k5_cert))


def test_rejects_count_mismatch(k5_cert):
    bad = copy.deepcopy(k5_cert)
    bad["count"] = 0
    assert verify_certificate(bad).reason == "count mismatch"


def test_rejects_crossed_thick_edge(k5_cert):
    bad = copy.deepcopy(k5_cert)
    crossed = bad["crossings"][0]["a"]["edge"]
    for item in bad["graph"]["edges"]:
        if item["id"] == crossed:
            item["thick"] = True
    assert verify_certificate(_rehash(bad)).reason == "thick edge crossed"


def test_rejects_hash_mismatch(k5_cert):
    bad = copy.deepcopy(k5_cert)
    bad["graph_sha"] = "0" * 64
    assert verify_certificate(bad).reason == "graph hash mismatch"


def test_rejects_missing_crossing(k5_cert):
    bad = copy.deepcopy(k5_cert)
    bad["crossings"] = []
    bad["count"] = 0
    assert not verify_certificate(bad)


def test_rejects_swapped_rotation(k5_cert):
    bad = copy.deepcopy(k5_cert)
    rot = bad["embedding"]["rotation"]
    v = next(v for v, r in sorted(rot.items()) if len(r) >= 4 and not v.startswith("~"))
    rot[v][0], rot[v][1] = rot[v][1], rot[v][0]
    assert not verify_certificate(bad)


def test_rejects_crossing_vertex_out_of_order(k5_cert):
    bad = copy.deepcopy(k5_cert)
    rot = bad["embedding"]["rotation"]["~x0"]
    rot[0], rot[1] = rot[1], rot[0]
    verdict = verify_certificate(bad)
    assert not verdict and "rigid" in verdict.reason


def test_rejects_wrong_surface():
    cert = crossing_number(complete_graph(5), Surface(True, 1)).certificate.to_dict()
    assert verify_certificate(cert)
    cert["surface"] = {"orientable": True, "genus": 0}
    assert "genus" in verify_certificate(cert).reason


def test_rejects_garbage():
    assert "malformed" in verify_certificate("{nope").reason
    assert "missing" in verify_certificate({}).reason
