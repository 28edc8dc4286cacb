import json


from qvote.cli import main
from qvote.election import ElectionAdversary, ElectionConfig, run_election


def test_run_subcommand_writes_result_and_transcript(tmp_path):
    out = tmp_path / "r.json"
    transcript = tmp_path / "t.jsonl"
    code = main([
        "run", "--voters", "3", "--votes", "101", "--n", "16", "--m", "3",
        "--copies", "30", "--lambda", "0.9", "--seed", "7",
        "--out", str(out), "--transcript", str(transcript),
    ])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["tally"] == 2
    assert data["outcome"] == "completed"
    assert data["config"]["seed"] == 7
    lines = transcript.read_text().strip().splitlines()
    assert json.loads(lines[0])["seq"] == 1


def test_identical_argv_gives_byte_identical_outputs(tmp_path):
    argv = ["experiment", "csqbc", "--n", "4,8", "--trials", "60", "--seed", "5"]
    files = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        assert main(argv + ["--csv", str(path)]) == 0
        files.append(path.read_bytes())
    assert files[0] == files[1]


def test_qba_experiment_row_count_and_schema(tmp_path):
    path = tmp_path / "q.csv"
    code = main([
        "experiment", "qba", "--copies", "1:50", "--lambda", "0.9",
        "--gamma", "0", "--trials", "40", "--seed", "1", "--csv", str(path),
    ])
    assert code == 0
    lines = path.read_text().strip().splitlines()
    assert lines[0].startswith("# config: ")
    assert "\"seed\": 1" in lines[0]
    assert lines[1] == "T,trials,p_detectable,p_successful,stderr_detectable,stderr_successful"
    assert len(lines) == 2 + 50


def test_csqbc_experiment_default_sweep(tmp_path):
    path = tmp_path / "c.csv"
    code = main([
        "experiment", "csqbc", "--n", "4,8,12,16", "--trials", "50",
        "--seed", "1", "--csv", str(path),
    ])
    assert code == 0
    lines = path.read_text().strip().splitlines()
    assert lines[1] == "n,m,trials,success_rate,stderr"
    assert len(lines) == 2 + 4


def test_cheat_and_fidelity_experiments(tmp_path):
    cheat_csv = tmp_path / "cheat.csv"
    assert main(["experiment", "cheat", "--mode", "miner", "--m", "1,3",
                 "--trials", "200", "--seed", "2", "--csv", str(cheat_csv)]) == 0
    lines = cheat_csv.read_text().strip().splitlines()
    assert lines[1].startswith("mode,n,m,trials,success_rate,detection_rate")
    assert len(lines) == 2 + 2
    fid_csv = tmp_path / "fid.csv"
    assert main(["experiment", "fidelity", "--p", "0,0.1", "--seed", "0",
                 "--csv", str(fid_csv)]) == 0
    assert fid_csv.read_text().strip().splitlines()[1] == "p,fidelity"


def test_seed_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("QVOTE_SEED", "99")
    out = tmp_path / "r.json"
    assert main(["run", "--voters", "2", "--votes", "10", "--n", "8", "--m", "1",
                 "--copies", "5", "--seed", "7", "--out", str(out)]) in (0, 2)
    assert json.loads(out.read_text())["config"]["seed"] == 99


def test_unknown_flags_and_commands_exit_1(capsys):
    assert main(["run", "--voters", "3", "--bogus"]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["experiment", "qba", "--gamma", "maybe"]) == 1
    err = capsys.readouterr().err
    assert "usage" in err.lower() or "error" in err.lower()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "qvote" in capsys.readouterr().out


def test_config_error_exits_1(tmp_path):
    # n must be a multiple of 4
    assert main(["run", "--voters", "3", "--n", "10", "--seed", "0"]) == 1


def test_protocol_abort_exits_2(tmp_path):
    # find a seed whose probe run aborts, then check the CLI surfaces exit 2
    seed = next(
        s for s in range(20)
        if run_election(ElectionConfig(
            voters=2, votes=(1, 0), n=8, m=1, copies=5, lam=0.9, seed=s,
            adversary=ElectionAdversary(kind="probe", miner=0),
        )).outcome != "completed"
    )
    out = tmp_path / "r.json"
    code = main(["run", "--voters", "2", "--votes", "10", "--n", "8", "--m", "1",
                 "--copies", "5", "--seed", str(seed), "--adversary", "probe:0",
                 "--out", str(out)])
    assert code == 2
    assert json.loads(out.read_text())["outcome"] == "aborted_commitment"


def test_stdout_emission(capsys):
    assert main(["experiment", "fidelity", "--p", "0", "--seed", "0"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[1] == "p,fidelity"
