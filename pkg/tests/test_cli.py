import json
import subprocess
import sys

import pytest

from polyarena.cli import build_parser, main, run_bench


def test_parser_subcommands():
    parser = build_parser()
    args = parser.parse_args(["bench", "--recipe", "pong", "--size", "64",
                              "--steps", "10"])
    assert args.command == "bench" and args.size == 64

    args = parser.parse_args(["serve", "--recipe", "pong", "--fps", "30",
                              "--port", "9000"])
    assert args.fps == 30 and args.port == 9000

    with pytest.raises(SystemExit) as err:
        parser.parse_args(["bench"])  # missing --recipe
    assert err.value.code == 2

    with pytest.raises(SystemExit):
        parser.parse_args(["explode"])


def test_bench_reports_fps(capsys):
    args = build_parser().parse_args(
        ["bench", "--recipe", "pong", "--size", "64", "--steps", "50"])
    fps = run_bench(args)
    out = capsys.readouterr().out
    assert "fps" in out and f"{fps:.1f}" in out
    assert fps > 0


def test_dataset_command(tmp_path, capsys):
    out_dir = tmp_path / "ds"
    code = main(["dataset", "--recipe", "pong", "--episodes", "1",
                 "--size", "8", "--out", str(out_dir), "--seed", "1"])
    assert code == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["recipe"] == "pong"
    assert "wrote 1 episodes" in capsys.readouterr().out


def test_replay_command(tmp_path, capsys):
    out_dir = tmp_path / "ds"
    main(["dataset", "--recipe", "pong", "--episodes", "1", "--size", "8",
          "--out", str(out_dir), "--seed", "1"])
    code = main(["replay", str(out_dir / "episode_0" / "episode.log"),
                 "--out", str(tmp_path / "frames"), "--size", "16"])
    assert code == 0
    frames = list((tmp_path / "frames").glob("frame_*.png"))
    assert frames and "rendered" in capsys.readouterr().out


def test_usage_error_exit_code_via_subprocess():
    proc = subprocess.run([sys.executable, "-m", "polyarena.cli", "--nope"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert "usage" in proc.stderr.lower()
