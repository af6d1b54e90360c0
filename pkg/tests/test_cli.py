import json
import signal
import subprocess
import sys
from urllib.request import urlopen

from conftest import FIXTURES
from lexalign.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ingest_writes_snapshot(tmp_path, capsys):
    out_path = tmp_path / "store.json"
    code, out, _ = run(capsys, "ingest", str(FIXTURES / "idioms_dict"), "-o", str(out_path))
    assert code == 0
    assert out_path.exists()
    assert "7 translation entries" in out


def test_query_prints_rows(tmp_path, capsys):
    snapshot = tmp_path / "store.json"
    assert main(["ingest", str(FIXTURES / "idioms_dict"), "-o", str(snapshot)]) == 0
    capsys.readouterr()
    code, out, _ = run(
        capsys, "query", str(snapshot), str(FIXTURES / "translations_query.rq")
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "?langCode\t?langName\t?translationWord"
    assert len(lines) == 8
    assert "fr\tFrench\tpleuvoir des cordes" in lines


def test_query_accepts_tsv_directory(capsys):
    code, out, _ = run(
        capsys,
        "query",
        str(FIXTURES / "idioms_dict"),
        str(FIXTURES / "translations_query.rq"),
    )
    assert code == 0
    assert "sv\tSwedish\tösregna" in out


def test_translate_from_store(capsys):
    code, out, _ = run(
        capsys,
        "translate",
        str(FIXTURES / "biblio_dict"),
        "université",
        "--from",
        "fr",
        "--to",
        "en",
    )
    assert code == 0
    assert out.splitlines() == ["school", "university"]


def test_match_and_eval(tmp_path, capsys):
    out_path = tmp_path / "alignment.tsv"
    code, out, _ = run(
        capsys,
        "match",
        str(FIXTURES / "biblio_fr.nt"),
        str(FIXTURES / "biblio_en.nt"),
        "--store",
        str(FIXTURES / "biblio_dict"),
        "--thesaurus",
        str(FIXTURES / "mini_thesaurus_ic.tsv"),
        "--from",
        "fr",
        "--to",
        "en",
        "-o",
        str(out_path),
    )
    assert code == 0
    assert "wrote 8 correspondences" in out

    code, out, _ = run(
        capsys, "eval", str(out_path), str(FIXTURES / "reference_alignment.tsv")
    )
    assert code == 0
    assert out.strip() == "precision=1.00 recall=0.89 |A|=8 |R|=9 |R∩A|=8"


def test_match_no_structure_drops_revue(tmp_path, capsys):
    out_path = tmp_path / "alignment.tsv"
    code, _, _ = run(
        capsys,
        "match",
        str(FIXTURES / "biblio_fr.nt"),
        str(FIXTURES / "biblio_en.nt"),
        "--store",
        str(FIXTURES / "biblio_dict"),
        "--no-structure",
        "--from",
        "fr",
        "--to",
        "en",
        "-o",
        str(out_path),
    )
    assert code == 0
    assert "Revue" not in out_path.read_text("utf-8")


def test_match_with_static_table(tmp_path, capsys):
    out_path = tmp_path / "alignment.tsv"
    code, _, _ = run(
        capsys,
        "match",
        str(FIXTURES / "biblio_fr.nt"),
        str(FIXTURES / "biblio_en.nt"),
        "--table",
        str(FIXTURES / "static_table.tsv"),
        "--from",
        "fr",
        "--to",
        "en",
        "-o",
        str(out_path),
    )
    assert code == 0
    text = out_path.read_text("utf-8")
    # the table translates isbn to itself, so that pair must appear; its
    # "Film" -> "Film" answer has no counterpart class on the English side
    assert "#isbn\thttp://example.org/biblio-en#isbn" in text
    assert "#Film\t" not in text


def test_usage_error_exit_code_1(capsys):
    assert main(["match", "only-one-arg"]) == 1
    err = capsys.readouterr().err
    assert "usage error" in err


def test_unknown_command_exit_code_1(capsys):
    assert main(["frobnicate"]) == 1


def test_data_error_exit_code_2(tmp_path, capsys):
    assert main(["ingest", str(tmp_path), "-o", str(tmp_path / "s.json")]) == 2
    err = capsys.readouterr().err
    assert "missing table file" in err


def test_eval_bad_file_exit_code_2(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("a\tb\t1.5\n", "utf-8")
    good = FIXTURES / "reference_alignment.tsv"
    assert main(["eval", str(bad), str(good)]) == 2


def test_translate_without_store_or_endpoint_is_usage_error(capsys):
    assert main(["translate", "word", "--from", "fr", "--to", "en"]) == 1


def test_translate_through_endpoint(capsys, biblio_store):
    from lexalign.lexiserve import ServiceConfig, serve

    with serve(ServiceConfig(port=0), biblio_store) as handle:
        code, out, _ = run(
            capsys,
            "translate",
            "--endpoint",
            handle.endpoint,
            "film",
            "--from",
            "fr",
            "--to",
            "en",
        )
    assert code == 0
    assert out.splitlines() == ["cinema", "film", "flick", "motion picture", "movie"]


def test_serve_subprocess_graceful_shutdown():
    proc = subprocess.Popen(
        [
            sys.executable,
            "-m",
            "lexalign.cli",
            "serve",
            str(FIXTURES / "idioms_dict"),
            "--bind",
            "127.0.0.1:0",
        ],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
    )
    try:
        line = proc.stdout.readline()
        assert "serving on http://" in line
        endpoint = line.split("serving on ", 1)[1].split(" ", 1)[0].strip()
        with urlopen(endpoint + "/stats", timeout=5) as resp:
            payload = json.loads(resp.read())
        assert payload["translation_entry_count"] == 7
        proc.send_signal(signal.SIGTERM)
        assert proc.wait(timeout=10) == 0
    finally:
        if proc.poll() is None:
            proc.kill()
