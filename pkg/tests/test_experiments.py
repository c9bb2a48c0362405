import hashlib
import json
from pathlib import Path

import pytest

from tinygraph.experiments import (CSV_SCHEMA, ConfigError, grid_points, load_config,
                                   run_experiment)

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _cfg(obj) -> bytes:
    return json.dumps(obj).encode()


def test_config_validation():
    with pytest.raises(ConfigError):
        load_config(b"[1, 2]")
    with pytest.raises(ConfigError):
        load_config(_cfg({"experiment": "nope"}))
    with pytest.raises(ConfigError):
        load_config(b"{not json")
    cfg, digest = load_config(_cfg({"experiment": "crossover"}))
    assert digest == hashlib.sha256(_cfg({"experiment": "crossover"})).hexdigest()


def test_missing_parameter_is_reported():
    with pytest.raises(ConfigError):
        run_experiment(_cfg({"experiment": "diversity", "params": {"n": 10}}))


def test_grid_points():
    assert grid_points([0.5, 1, 0.5]) == [0.5, 1.0]
    assert grid_points({"start": 0, "stop": 1, "num": 3}) == [0.0, 0.5, 1.0]
    with pytest.raises(ConfigError):
        grid_points("0..1")


def test_report_metadata_and_csv_schema():
    raw = (CONFIGS / "ladder_class.json").read_bytes()
    text, table = run_experiment(raw)
    rep = json.loads(text)
    assert rep["config_sha256"] == hashlib.sha256(raw).hexdigest()
    assert rep["experiment"] == "ladder-class" and rep["claim"] and rep["seeds"]
    assert rep["results"]["closure"]["counts"] == {"1": 1, "2": 2, "3": 3, "4": 7}
    assert rep["results"]["alpha_reverified"]
    assert table.splitlines()[0] == f"# schema: {CSV_SCHEMA}"
    assert table.splitlines()[1] == "k,count,alpha_pow_k"


def test_empty_ladder_class():
    text, table = run_experiment(_cfg({"experiment": "ladder-class", "params": {"levels": []}}))
    assert json.loads(text)["results"]["closure"] is None


def test_diversity_complete_graph_override():
    text, _ = run_experiment(_cfg({"experiment": "diversity", "seed": 3,
                                   "params": {"n": 12, "k": 5, "samples": 20, "graph": "complete"}}))
    res = json.loads(text)["results"]
    assert res["distinct"] == 1 and res["analytic"] is None


@pytest.mark.parametrize("name", ["ladder_class.json", "diversity.json", "crossover.json"])
def test_reruns_are_byte_identical(name):
    raw = (CONFIGS / name).read_bytes()
    assert run_experiment(raw) == run_experiment(raw)


def test_workers_do_not_change_output():
    raw = _cfg({"experiment": "tinyness-profile", "seed": 9,
                "params": {"n": 30, "d": 1, "replicates": 4, "desk_k0": 5}})
    assert run_experiment(raw, workers=1) == run_experiment(raw, workers=3)
