import json
import os
import subprocess

import pytest

BIN = os.environ.get("CHOREDUEL_BIN")

pytestmark = pytest.mark.skipif(BIN is None, reason="CHOREDUEL_BIN not set")


def run(*args, stdin=None, timeout=60):
    return subprocess.run(
        [BIN, *args], input=stdin, capture_output=True, text=True, timeout=timeout
    )


def duel_args(out, n="2", eps="1/4", algo="all-to-one", extra=()):
    return ["duel", "--n", n, "--eps", eps, "--algo", algo, "--out", str(out), *extra]


@pytest.fixture
def always_one(tmp_path):
    script = tmp_path / "always_one.py"
    script.write_text(
        "import sys, json\n"
        "for line in sys.stdin:\n"
        "    msg = json.loads(line)\n"
        "    if msg.get('type') == 'chore':\n"
        "        print(json.dumps({'type': 'assign', 'agent': 1}), flush=True)\n"
    )
    return f"python3 {script}"


def test_duel_violation_then_verify(tmp_path):
    out = tmp_path / "t.jsonl"
    r = run(*duel_args(out))
    assert r.returncode == 0, r.stderr
    assert "verdict: violation(a_1) after 578 chores" in r.stdout
    assert "ratio: 2 (~2)" in r.stdout

    v = run("verify", str(out))
    assert v.returncode == 0, v.stdout
    assert v.stdout.startswith("valid: agent a_1 pays ratio 2")


def test_duel_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run(*duel_args(a, algo="delayer")).returncode == 0
    assert run(*duel_args(b, algo="delayer")).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_duel_budget_exhausted_exit_2(tmp_path):
    out = tmp_path / "t.jsonl"
    r = run(*duel_args(out, n="3", eps="1/2", extra=["--budget", "50"]))
    assert r.returncode == 2
    assert "verdict: budget-exhausted after 50 chores" in r.stdout
    assert "best certified ratio: 50/17" in r.stdout
    # A transcript without a violation verdict is nothing to verify.
    assert run("verify", str(out)).returncode == 2


def test_duel_rejects_policy_ambiguity(tmp_path):
    out = tmp_path / "t.jsonl"
    r = run("duel", "--n", "2", "--eps", "1/4", "--out", str(out))
    assert r.returncode == 1
    assert "exactly one of --algo or --cmd" in r.stderr
    both = run(*duel_args(out, extra=["--cmd", "true"]))
    assert both.returncode != 0


def test_duel_unknown_policy(tmp_path):
    r = run(*duel_args(tmp_path / "t.jsonl", algo="sideways"))
    assert r.returncode == 1
    assert "unknown policy" in r.stderr


def test_duel_bad_epsilon(tmp_path):
    r = run(*duel_args(tmp_path / "t.jsonl", eps="5/4"))
    assert r.returncode == 1
    assert "epsilon" in r.stderr


def test_external_policy_matches_builtin(tmp_path, always_one):
    builtin_out = tmp_path / "builtin.jsonl"
    external_out = tmp_path / "external.jsonl"
    assert run(*duel_args(builtin_out)).returncode == 0
    r = run("duel", "--n", "2", "--eps", "1/4", "--cmd", always_one,
            "--out", str(external_out))
    assert r.returncode == 0, r.stdout + r.stderr

    builtin_lines = builtin_out.read_text().splitlines()
    external_lines = external_out.read_text().splitlines()
    assert builtin_lines[1:] == external_lines[1:]  # headers name different policies
    assert json.loads(external_lines[0])["algo"].startswith("external:")
    assert run("verify", str(external_out)).returncode == 0


def test_external_policy_out_of_range_reply(tmp_path):
    out = tmp_path / "t.jsonl"
    cmd = ("python3 -c \"import sys,json\n"
           "for line in sys.stdin:\n"
           "    if json.loads(line).get('type')=='chore':\n"
           "        print(json.dumps({'type':'assign','agent':7}),flush=True)\"")
    r = run("duel", "--n", "2", "--eps", "1/4", "--cmd", cmd, "--out", str(out))
    assert r.returncode == 3
    assert "verdict: protocol-failure after 1 chores" in r.stdout
    assert "out of range" in r.stdout


def test_external_policy_timeout(tmp_path):
    out = tmp_path / "t.jsonl"
    r = run("duel", "--n", "2", "--eps", "1/4", "--cmd", "sleep 30",
            "--timeout-ms", "300", "--out", str(out))
    assert r.returncode == 3
    assert "no reply within 300 ms" in r.stdout
    # The forfeit still leaves a loadable transcript with the failure verdict.
    assert run("verify", str(out)).returncode == 2


def test_verify_flags_tampered_cost(tmp_path):
    out = tmp_path / "t.jsonl"
    assert run(*duel_args(out)).returncode == 0
    text = out.read_text()
    tampered = tmp_path / "bad.jsonl"
    # Chore 1 went to a_1, so changing its cost must break the certificate.
    tampered.write_text(text.replace('"16/289"', '"15/289"', 1))
    v = run("verify", str(tampered))
    assert v.returncode == 1
    assert v.stdout.startswith("invalid:")


def test_verify_rejects_truncation_and_noise(tmp_path):
    out = tmp_path / "t.jsonl"
    assert run(*duel_args(out)).returncode == 0
    cut = tmp_path / "cut.jsonl"
    cut.write_text(out.read_text()[:-2])
    r = run("verify", str(cut))
    assert r.returncode == 4
    assert r.stdout.startswith("structural error:")

    noise = tmp_path / "noise.jsonl"
    noise.write_text("definitely not a transcript\n")
    assert run("verify", str(noise)).returncode == 4

    assert run("verify", str(tmp_path / "missing.jsonl")).returncode == 4


def test_mms_values():
    r = run("mms", "--costs", "1,1,2", "--k", "2")
    assert r.returncode == 0
    value, partition = r.stdout.splitlines()
    assert value == "2"
    assert partition == "partition: [3] [1,2]"

    assert run("mms", "--costs", "5", "--k", "3").stdout.splitlines()[0] == "5"
    assert run("mms", "--costs", "1/3,1/6", "--k", "1").stdout.splitlines()[0] == "1/2"

    bad = run("mms", "--costs", "1,x", "--k", "2")
    assert bad.returncode == 1


def test_play_reproduces_forced_trace(tmp_path):
    out = tmp_path / "t.jsonl"
    r = run("play", "--n", "2", "--eps", "1/4", "--out", str(out), stdin="2\n2\n")
    assert r.returncode == 0
    assert "chore 1 costs: 16/289 4" in r.stdout
    assert "chore 2 costs: 16/17 4" in r.stdout
    assert "verdict: violation(a_2) after 2 chores" in r.stdout
    assert run("verify", str(out)).returncode == 0


def test_play_reprompts_on_nonsense(tmp_path):
    out = tmp_path / "t.jsonl"
    r = run("play", "--n", "2", "--eps", "1/4", "--out", str(out),
            stdin="7\nbanana\n2\n2\n")
    assert r.returncode == 0
    assert r.stdout.count("enter a number in [1..2] or q") == 2
    assert "verdict: violation(a_2)" in r.stdout


def test_play_quit_saves_partial_transcript(tmp_path):
    out = tmp_path / "t.jsonl"
    r = run("play", "--n", "2", "--eps", "1/4", "--out", str(out), stdin="2\nq\n")
    assert r.returncode == 0
    assert "aborted without verdict" in r.stdout
    lines = out.read_text().splitlines()
    assert len(lines) == 2  # header + the one assigned chore, no verdict
    assert json.loads(lines[1])["assigned"] == 2
    assert run("verify", str(out)).returncode == 2


def test_report_table(tmp_path):
    first = tmp_path / "a.jsonl"
    second = tmp_path / "b.jsonl"
    assert run(*duel_args(first)).returncode == 0
    assert run(*duel_args(second, n="3", eps="1/2", extra=["--budget", "50"])).returncode == 2

    r = run("report", str(first), str(second))
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert lines[0].split() == [
        "algo", "n", "eps", "chores", "verdict", "ratio", "~ratio", "threshold", "~threshold",
    ]
    assert any("violation(a_1)" in line for line in lines)
    assert any("budget-exhausted" in line for line in lines)

    empty = run("report")
    assert empty.returncode == 0

    broken = tmp_path / "broken.jsonl"
    broken.write_text("{}\n")
    assert run("report", str(broken)).returncode == 4
