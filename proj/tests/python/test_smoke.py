import json
import os
import subprocess

import pytest

import litnet

FIXTURES = os.environ.get("LITNET_FIXTURES", os.path.join(os.path.dirname(__file__), "..", "fixtures"))


def write_pdf(path, paragraphs):
    """One-page Helvetica PDF, one text line per paragraph."""
    y, content = 740, ""
    for p in paragraphs:
        content += "BT /F1 11 Tf 72 %d Td (%s) Tj ET\n" % (y, p)
        y -= 30
    objs = [
        "<< /Type /Catalog /Pages 2 0 R >>",
        "<< /Type /Pages /Kids [4 0 R] /Count 1 >>",
        "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica /Encoding /WinAnsiEncoding >>",
        "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Resources << /Font << /F1 3 0 R >> >> /Contents 5 0 R >>",
        "<< /Length %d >>\nstream\n%sendstream" % (len(content), content),
    ]
    out, offsets = "%PDF-1.4\n", []
    for i, o in enumerate(objs):
        offsets.append(len(out))
        out += "%d 0 obj\n%s\nendobj\n" % (i + 1, o)
    xref = len(out)
    out += "xref\n0 %d\n0000000000 65535 f \n" % (len(objs) + 1)
    out += "".join("%010d 00000 n \n" % off for off in offsets)
    out += "trailer\n<< /Size %d /Root 1 0 R >>\nstartxref\n%d\n%%%%EOF\n" % (len(objs) + 1, xref)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="latin-1") as f:
        f.write(out)


def write_corpus(corpus):
    write_pdf(os.path.join(corpus, "pdfs", "a.pdf"),
              ["Results", "Information increases awareness. Credit reduces vulnerability."])
    write_pdf(os.path.join(corpus, "pdfs", "b.pdf"),
              ["Results", "Information increases awareness."])


def test_version():
    assert litnet.__version__ == "0.1.0"


def test_text_helpers():
    assert litnet.fold_to_ascii("café") == "cafe"
    assert litnet.split_sentences("Credit reduces risk. Trust improves uptake.") == [
        "Credit reduces risk.", "Trust improves uptake."]
    assert litnet.lemmatize("increases", "VERB") == "increase"
    sections = litnet.detect_imrad("Introduction\nBackground.\nResults\nA finding.")
    assert "results" in json.dumps(sections)


def test_extract_and_graph():
    triples = litnet.extract_relations("Information increases awareness.")
    assert [(t["source_label"], t["sign"], t["target_label"]) for t in triples] == [
        ("information", "positive", "awareness")]
    g = litnet.build_graph(triples)
    assert g["n_articles"] == 1
    assert [(e["source"], e["target"], e["dominant_sign"]) for e in g["edges"]] == [
        ("information", "awareness", "positive")]
    assert g["edges"][0]["weight"] == 1.0
    svg = litnet.render_svg(triples)
    assert svg.startswith("<?xml") and "arrow-positive" in svg


def test_pdf_fixture():
    text = litnet.extract_pdf_text(os.path.join(FIXTURES, "hello.pdf"))
    assert text.strip()
    with pytest.raises(litnet.LitnetError):
        litnet.extract_pdf_text(os.path.join(FIXTURES, "encrypted.pdf"))


def test_run_pipeline(tmp_path):
    corpus = str(tmp_path / "corpus")
    write_corpus(corpus)
    config = {"corpus_dir": corpus, "seeds": {"sample": 1, "cluster": 2}}
    lines = litnet.run_pipeline(config)
    assert len(lines) == 8
    with open(os.path.join(corpus, "graph.json")) as f:
        g = json.load(f)
    edges = {(e["source"], e["target"]): e for e in g["edges"]}
    assert edges[("information", "awareness")]["article_count"] == 2
    assert edges[("credit", "vulnerability")]["dominant_sign"] == "negative"


@pytest.mark.skipif(not os.environ.get("LITNET_BIN"), reason="LITNET_BIN not set")
def test_cli(tmp_path):
    corpus = str(tmp_path / "corpus")
    write_corpus(corpus)
    cli = os.environ["LITNET_BIN"]
    args = [cli, "--corpus", corpus, "--seed-sample", "1", "--seed-cluster", "2"]
    first = subprocess.run(args + ["all"], capture_output=True, text=True)
    assert first.returncode == 0, first.stderr
    assert "render: done" in first.stdout
    second = subprocess.run(args + ["all"], capture_output=True, text=True)
    assert second.returncode == 0
    assert second.stdout.count("up to date") == 8

    fresh = str(tmp_path / "fresh")
    write_corpus(fresh)
    missing = subprocess.run([cli, "--corpus", fresh, "--seed-sample", "1", "--seed-cluster", "2", "graph"],
                             capture_output=True, text=True)
    assert missing.returncode == 2
    assert "MissingPriorStage" in missing.stderr
    no_seed = subprocess.run([cli, "--corpus", fresh, "all"], capture_output=True, text=True)
    assert no_seed.returncode == 2
    assert subprocess.run([cli, "bogus"], capture_output=True).returncode == 2
