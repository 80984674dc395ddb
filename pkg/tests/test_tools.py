import asyncio
import json

import numpy as np
import pytest

from labelswitch.cli import read_array, save_fixture
from labelswitch.tools import inject_tool, map_pivot_tool, permute_tool, relabel_tool, simulate_tool
from labelswitch.utils import RunStore, ToolResult
from labelswitch.utils.errors import ArrayFormatError, MissingInputError, UsageError


@pytest.fixture
def fixture_dir(tmp_path, clean_chain):
    save_fixture(clean_chain, tmp_path / "clean", "separated-normal")
    return tmp_path / "clean"


def test_tool_result_from_library_error():
    result = ToolResult.from_exception(MissingInputError("PRA", "prapivot"), "relabel")
    assert result.is_error()
    assert result.metadata == {"tool": "relabel", "error_type": "MissingInputError", "exit_code": 1}
    payload = result.to_dict()
    assert payload["status"] == "error"
    assert "prapivot" in payload["error"]


def test_tool_result_from_foreign_error():
    result = ToolResult.from_exception(KeyError("x"), "permute")
    assert "exit_code" not in result.metadata
    assert "error" not in ToolResult.success({"a": 1}).to_dict()


def test_relabel_tool_records_run(fixture_dir, tmp_path, clean_chain):
    store = RunStore()
    response = asyncio.run(relabel_tool(
        "ECR,STEPHENS", str(tmp_path / "out"),
        z=str(fixture_dir / "z.lsa"), p=str(fixture_dir / "p.lsa"), zpivot=str(fixture_dir / "zpivot.lsa"),
        store=store,
    ))
    assert response["status"] == "success"
    assert response["result"]["summary"]["order"] == ["ECR", "STEPHENS"]
    run_id = response["metadata"]["run_id"]
    entry = store.get(run_id)
    assert entry["tool"] == "relabel"
    assert "mcmc" not in entry["arguments"]
    perms = read_array(tmp_path / "out" / "permutations_STEPHENS.lsa", "int")
    assert perms.shape == (clean_chain.mcmc.m, 3)


def test_relabel_tool_error_envelope(fixture_dir, tmp_path):
    store = RunStore()
    response = asyncio.run(relabel_tool("PRA", str(tmp_path / "out"), mcmc=str(fixture_dir / "mcmc.lsa"), store=store))
    assert response["status"] == "error"
    assert response["metadata"]["error_type"] == "MissingInputError"
    assert response["metadata"]["exit_code"] == 1
    assert store.list_runs() == []


def test_permute_tool_reports_data_errors(tmp_path):
    bad = tmp_path / "bad.lsa"
    bad.write_bytes(b"nonsense")
    response = asyncio.run(permute_tool(str(bad), str(bad), str(tmp_path / "out.lsa")))
    assert response["status"] == "error"
    assert response["metadata"]["error_type"] == ArrayFormatError.__name__
    assert response["metadata"]["exit_code"] == 2


def test_map_pivot_tool(fixture_dir, clean_chain):
    response = asyncio.run(map_pivot_tool(
        "normal", str(fixture_dir / "mcmc.lsa"), str(fixture_dir / "z.lsa"), str(fixture_dir / "data.lsa")
    ))
    assert response["result"]["map_index"] == clean_chain.map_index + 1


def test_simulate_then_inject_tools(tmp_path):
    store = RunStore(max_runs=1)
    simulated = asyncio.run(simulate_tool(
        str(tmp_path / "f"), preset="separated-normal", seed=2, iterations=30, burn=10, store=store
    ))
    assert simulated["result"]["m"] == 20
    injected = asyncio.run(inject_tool(str(tmp_path / "f"), str(tmp_path / "s"), seed=3, store=store))
    assert injected["status"] == "success"
    assert injected["result"]["m"] == 20
    # max_runs=1 keeps only the latest entry
    assert [entry["tool"] for entry in store.list_runs()] == ["inject"]
    assert np.array_equal(read_array(tmp_path / "s" / "switches.lsa", "int").shape, (20, 3))


def test_simulate_tool_needs_a_source(tmp_path):
    response = asyncio.run(simulate_tool(str(tmp_path)))
    assert response["status"] == "error"
    assert response["metadata"]["error_type"] == "UsageError"


def test_run_store_history_json():
    store = RunStore()
    first = store.record("permute", {"mcmc": "a.lsa", "model": None}, {"m": 3})
    second = store.record("relabel", {"method": "ECR"}, {"files": {}})
    assert (first, second) == (1, 2)
    assert store.list_runs("permute")[0]["arguments"] == {"mcmc": "a.lsa"}
    history = json.loads(store.to_json())
    assert history["count"] == 2
    assert json.loads(store.entry_json(second))["tool"] == "relabel"
    with pytest.raises(UsageError, match="no run 3"):
        store.entry_json(3)
    with pytest.raises(UsageError, match="integer"):
        store.entry_json("latest")


def test_run_store_drops_oldest_runs():
    store = RunStore(max_runs=2)
    for tool in ("simulate", "inject", "relabel"):
        store.record(tool, {}, {})
    assert store.get(1) is None
    assert [entry["tool"] for entry in store.list_runs()] == ["inject", "relabel"]
    with pytest.raises(UsageError, match="stored runs: 2..3"):
        store.entry_json(1)


def test_server_registers_run_store():
    pytest.importorskip("mcp")
    from labelswitch.server import LabelSwitchServer

    server = LabelSwitchServer()
    assert isinstance(server.run_store, RunStore)
    tools = asyncio.run(server.server.list_tools())
    assert sorted(tool.name for tool in tools) == ["inject", "map_pivot", "permute", "relabel", "simulate"]
    templates = asyncio.run(server.server.list_resource_templates())
    assert [t.uriTemplate for t in templates] == ["runs://history/{run_id}"]
    with pytest.raises(ValueError, match="stdio"):
        server.run("sse")
