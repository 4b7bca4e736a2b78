from fastapi.testclient import TestClient

from padic_chabauty.service import app
from padic_chabauty.service.api import parse_curve_shorthand

client = TestClient(app)


class TestShorthand:
    def test_family(self):
        q, r = parse_curve_shorthand("y2+y=x7+x+1")
        assert q == [1]
        assert r == [1, 1, 0, 0, 0, 0, 0, 1]

    def test_negative_terms(self):
        q, r = parse_curve_shorthand("y2 = x5 - x3 - 1")
        assert q == [0]
        assert r == [-1, 0, 0, -1, 0, 1]

    def test_xy_term(self):
        q, r = parse_curve_shorthand("y2+xy=x3+1")
        assert q == [0, 1]
        assert r == [1, 0, 0, 1]

    def test_coefficient_terms(self):
        q, r = parse_curve_shorthand("y2+3y=2x3+5x+7")
        assert q == [3]
        assert r == [7, 5, 0, 2]


class TestEndpoints:
    def test_healthz(self):
        res = client.get("/healthz")
        assert res.status_code == 200

    def test_model(self):
        res = client.post(
            "/model", json={"prime": 2, "genus": 1, "f": ["1", "0", "-1", "0"]}
        )
        assert res.status_code == 200
        body = res.json()
        assert body["schema"] == "padic-chabauty/1"
        assert body["result"]["total_smooth"] == 4

    def test_expect_exact(self):
        res = client.post("/expect/exact", json={"prime": 2, "k": 1})
        assert res.json()["result"]["exact_value"] == "23/8"

    def test_expect_mc_small(self):
        res = client.post(
            "/expect/mc",
            json={"prime": 3, "genus": 1, "trials": 200, "seed": 4},
        )
        body = res.json()["result"]
        assert body["trials"] == 200
        assert sum(body["histogram"].values()) == 200

    def test_expect_cases_and_x0(self):
        res = client.post(
            "/expect/cases", json={"prime": 2, "trials": 500, "seed": 1}
        )
        cases = res.json()["result"]["cases"]
        assert cases["unit-derivative"]["expected"] == "1/2"
        res = client.post("/expect/x0", json={"prime": 2, "trials": 300, "seed": 1})
        assert res.status_code == 200

    def test_rholog(self):
        res = client.post("/rholog", json={"curve": "y2+y=x5+x+1"})
        body = res.json()["result"]
        assert body["image"] == [[1, 0]]
        assert body["hypotheses"]["single_disk"] is True

    def test_rholog_explicit_coefficient_lists(self):
        res = client.post(
            "/rholog",
            json={"q": ["1"], "r": ["1", "1", "0", "0", "0", "1"], "genus": 2},
        )
        assert res.json()["result"]["image"] == [[1, 0]]

    def test_disks_odd_p(self):
        res = client.post(
            "/disks",
            json={"prime": 3, "f": ["1", "0", "0", "0", "0", "1"]},
        )
        body = res.json()["result"]
        assert body["disk_count"] == 4
        assert body["sum_n_D"] <= 2

    def test_p1image_sharpness(self):
        comps = [["1"], ["0", "9"], ["0", "0", "729"]]  # p=3, n=2 family
        res = client.post(
            "/p1image", json={"prime": 3, "components": comps, "domain": "P1"}
        )
        assert res.json()["result"]["size"] == 7

    def test_seriesimage(self):
        res = client.post(
            "/seriesimage",
            json={"prime": 3, "components": [["0", "1"], ["0", "0", "1"]]},
        )
        assert res.json()["result"]["points"] == [[1, 0]]

    def test_newton(self):
        res = client.post(
            "/newton", json={"prime": 2, "components": [["2", "1"]]}
        )
        body = res.json()["result"]
        assert body["n"] == 1 and body["N"] == 1
        assert [(v["x"], v["y"]) for v in body["vertices"]] == [(0, 1), (1, 0)]

    def test_wprep(self):
        res = client.post(
            "/wprep",
            json={"prime": 3, "coefficients": ["-3", "0", "1"], "precision": 6},
        )
        body = res.json()["result"]
        assert body["degree"] == 2
        assert body["unit_part"]["coefficients"][0]["unit"] == "1"

    def test_bounds(self):
        res = client.post(
            "/bounds",
            json={"genus": 10, "prime": 3, "disks": 4, "zero_budget": 6},
        )
        reports = {r["formula"]: r["value"] for r in res.json()["result"]["reports"]}
        assert reports["density-main"] == "221/256"
        assert reports["curve-image-bound"] == "124"  # 4*4 + 6*18

    def test_height(self):
        res = client.post("/height", json={"coeffs": ["0", "0", "0", "0", "32"]})
        assert res.json()["result"]["height"] == 2.0


class TestErrorMapping:
    def test_precondition_is_422(self):
        res = client.post(
            "/model", json={"prime": 2, "genus": 1, "f": ["1", "0", "0", "0"]}
        )
        assert res.status_code == 422
        assert res.json()["error"] == "InvalidCurve"

    def test_bad_curve_shorthand(self):
        res = client.post("/rholog", json={"curve": "nonsense"})
        assert res.status_code == 422

    def test_hypothesis_failure_is_422(self):
        res = client.post("/rholog", json={"curve": "y2+y=x5"})
        assert res.status_code == 422
        assert res.json()["error"] == "HypothesisFailed"

    def test_validation_error_is_422(self):
        res = client.post("/model", json={"prime": 2})
        assert res.status_code == 422
