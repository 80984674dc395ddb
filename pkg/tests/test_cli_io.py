import struct

import numpy as np
import pytest

from labelswitch.cli import (
    decode_array,
    encode_array,
    load_cli_config,
    parse_config_text,
    read_array,
    save_fixture,
    write_array,
)
from labelswitch.cli.main import main
from labelswitch.utils.errors import ArrayFormatError, ConfigError


@pytest.fixture
def fixture_dir(tmp_path, switched, clean_chain):
    """Clean and switched fixture directories written through the CLI format."""
    save_fixture(clean_chain, tmp_path / "clean", "separated-normal")
    save_fixture(switched[0], tmp_path / "switched", "separated-normal")
    write_array(switched[1].to_one_based(), tmp_path / "switched" / "switches.lsa")
    return tmp_path


def test_float_round_trip_is_bitwise(tmp_path, rng):
    array = rng.normal(size=(3, 2, 4))
    path = write_array(array, tmp_path / "a.lsa")
    back = read_array(path, "float")
    assert back.tobytes() == array.tobytes()
    assert path.stat().st_size == 8 + 8 * 3 + 8 * 24


def test_int_round_trip(tmp_path):
    array = np.array([[1, -2, 3], [2**40, 0, 7]], dtype=np.int64)
    back = read_array(write_array(array, tmp_path / "a.lsa"), "int")
    np.testing.assert_array_equal(back, array)
    assert back.dtype == np.int64


def test_bad_magic():
    data = b"LSARRX" + encode_array(np.zeros(2))[6:]
    with pytest.raises(ArrayFormatError, match="bad magic"):
        decode_array(data)


def test_truncated_payload_and_trailing_bytes():
    data = encode_array(np.arange(4.0))
    with pytest.raises(ArrayFormatError, match="truncated payload"):
        decode_array(data[:-3])
    with pytest.raises(ArrayFormatError, match="trailing bytes"):
        decode_array(data + b"\x00")


def test_dim_overflow():
    header = b"LSARR1" + struct.pack("<BB", 1, 2) + struct.pack("<2Q", 2**40, 2**40)
    with pytest.raises(ArrayFormatError, match="dim overflow"):
        decode_array(header)


def test_dtype_mismatch_is_rejected():
    with pytest.raises(ArrayFormatError, match="expected float array"):
        decode_array(encode_array(np.arange(3)), expect="float")
    with pytest.raises(ArrayFormatError, match="expected integer array"):
        decode_array(encode_array(np.arange(3.0)), expect="int")


def test_nan_is_reported_with_index():
    array = np.zeros((2, 3))
    array[1, 2] = np.nan
    with pytest.raises(ArrayFormatError, match=r"\(2, 3\)"):
        decode_array(encode_array(array))


def test_csv_fallback(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("# dims: 2,3\n1.5,2,3\n4,5,6\n", encoding="utf-8")
    np.testing.assert_array_equal(read_array(path), np.array([[1.5, 2, 3], [4, 5, 6]]))
    ints = tmp_path / "b.csv"
    ints.write_text("# dims: 3\n1,2,3\n", encoding="utf-8")
    assert read_array(ints, "int").dtype == np.int64
    with pytest.raises(ArrayFormatError, match="need 6 values"):
        path.write_text("# dims: 2,3\n1,2\n", encoding="utf-8")
        read_array(path)


def test_csv_written_with_full_precision(tmp_path):
    array = np.array([0.1, 1 / 3, 2.0 ** -30])
    np.testing.assert_array_equal(read_array(write_array(array, tmp_path / "a.csv"), "float"), array)


def test_config_text_parsing():
    values = parse_config_text("method = STEPHENS, ECR  # two methods\n\nthr-ecr = 1e-8\n")
    assert values == {"method": "STEPHENS, ECR", "thr_ecr": "1e-8"}
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("no equals sign")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config_text("z = a\nz = b")


def test_flags_override_config_file(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("method = STEPHENS,ECR\nthr-ste = 1e-3\nmax_ste = 7\nout-dir = o\n", encoding="utf-8")
    cli = load_cli_config(config, {"thr_ste": 1e-4, "z": None})
    assert cli.methods == ["STEPHENS", "ECR"]
    assert cli.thr_ste == 1e-4
    assert cli.max_ste == 7
    with pytest.raises(ConfigError, match="unknown option"):
        load_cli_config(None, {"colour": "red"})


def test_relabel_ecr_on_unswitched_fixture_is_identity(fixture_dir):
    clean = fixture_dir / "clean"
    out = fixture_dir / "o"
    code = main([
        "relabel", "--method", "ECR", "--z", str(clean / "z.lsa"),
        "--zpivot", str(clean / "zpivot.lsa"), "--out-dir", str(out),
    ])
    assert code == 0
    perms = read_array(out / "permutations_ECR.lsa", "int")
    np.testing.assert_array_equal(perms, np.tile([1, 2, 3], (perms.shape[0], 1)))
    for name in ("clusters", "similarity", "frequencies", "relabelled_z_ECR"):
        assert (out / f"{name}.lsa").exists()
    assert (out / "timings.txt").exists()
    assert "[ECR]" in (out / "summary.txt").read_text(encoding="utf-8")


def test_missing_input_exits_with_usage_code(fixture_dir, capsys):
    code = main(["relabel", "--method", "STEPHENS", "--z", str(fixture_dir / "clean" / "z.lsa"),
                 "--out-dir", str(fixture_dir / "o")])
    assert code == 1
    err = capsys.readouterr().err
    assert "STEPHENS" in err and "'p'" in err


def test_unknown_flag_exits_with_usage_code(capsys):
    assert main(["relabel", "--colour", "red"]) == 1
    assert main(["frobnicate"]) == 1


def test_data_error_exits_with_code_2(tmp_path, fixture_dir):
    bad = tmp_path / "bad.lsa"
    bad.write_bytes(b"LSARRX\x01\x01" + struct.pack("<Q", 0))
    code = main(["relabel", "--method", "ECR", "--z", str(bad),
                 "--zpivot", str(fixture_dir / "clean" / "zpivot.lsa"), "--out-dir", str(tmp_path / "o")])
    assert code == 2


def test_permute_with_ordering_output_sorts_constraint(fixture_dir):
    switched = fixture_dir / "switched"
    out = fixture_dir / "o"
    assert main(["relabel", "--method", "AIC", "--mcmc", str(switched / "mcmc.lsa"),
                 "--constraint", "1", "--out-dir", str(out)]) == 0
    assert main(["permute", "--mcmc", str(switched / "mcmc.lsa"),
                 "--permutations", str(out / "permutations_AIC.lsa"), "--out", str(out / "mcmc_AIC.lsa")]) == 0
    reordered = read_array(out / "mcmc_AIC.lsa", "float")
    assert (np.diff(reordered[:, :, 0], axis=1) >= 0).all()
    assert not (out / "clusters.lsa").exists()


def test_relabel_outputs_do_not_depend_on_threads(fixture_dir):
    switched = fixture_dir / "switched"
    common = [
        "relabel", "--method", "STEPHENS,ECR-ITERATIVE-1", "--method", "SJW",
        "--z", str(switched / "z.lsa"), "--p", str(switched / "p.lsa"),
        "--mcmc", str(switched / "mcmc.lsa"), "--data", str(switched / "data.lsa"),
        "--model", "normal", "--seed", "3",
    ]
    assert main(common + ["--threads", "1", "--out-dir", str(fixture_dir / "t1")]) == 0
    assert main(common + ["--threads", "4", "--out-dir", str(fixture_dir / "t4")]) == 0
    files = sorted(p.name for p in (fixture_dir / "t1").iterdir() if p.name != "timings.txt")
    assert "permutations_SJW.lsa" in files
    for name in files:
        assert (fixture_dir / "t1" / name).read_bytes() == (fixture_dir / "t4" / name).read_bytes()


def test_map_pivot_prints_one_based_index(fixture_dir, capsys, clean_chain):
    clean = fixture_dir / "clean"
    code = main(["map-pivot", "--model", "normal", "--mcmc", str(clean / "mcmc.lsa"),
                 "--z", str(clean / "z.lsa"), "--data", str(clean / "data.lsa")])
    assert code == 0
    assert capsys.readouterr().out.strip() == str(clean_chain.map_index + 1)


def test_simulate_and_inject_commands(tmp_path):
    fixture = tmp_path / "fixture"
    assert main(["simulate", "--preset", "separated-normal", "--seed", "4",
                 "--iterations", "40", "--burn", "10", "--out-dir", str(fixture)]) == 0
    assert read_array(fixture / "mcmc.lsa").shape == (30, 3, 3)
    assert "map_index" in (fixture / "fixture.txt").read_text(encoding="utf-8")
    assert main(["inject", "--in-dir", str(fixture), "--out-dir", str(tmp_path / "sw"), "--seed", "5"]) == 0
    switches = read_array(tmp_path / "sw" / "switches.lsa", "int")
    assert switches.shape == (30, 3)
    assert np.array_equal(read_array(tmp_path / "sw" / "z_true.lsa"), read_array(fixture / "z_true.lsa"))


def test_simulate_from_truth_config(tmp_path):
    write_array(np.array([[0.0, 1.0, 0.5], [6.0, 1.0, 0.5]]), tmp_path / "truth.lsa")
    config = tmp_path / "truth.cfg"
    config.write_text("kind = normal\nK = 2\nn = 50\nparams = truth.lsa\niterations = 30\nburn = 5\n", encoding="utf-8")
    assert main(["simulate", "--truth", str(config), "--out-dir", str(tmp_path / "f")]) == 0
    assert read_array(tmp_path / "f" / "z.lsa").shape == (25, 50)


def test_simulate_needs_one_source(tmp_path):
    assert main(["simulate", "--out-dir", str(tmp_path)]) == 1
