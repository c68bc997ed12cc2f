"""Signed findings networks from scientific articles."""

import json as _json
import os as _os

from ._litnet import (  # noqa: F401
    LitnetError,
    __version__,
    detect_imrad,
    extract_pdf_text,
    fold_to_ascii,
    lemmatize,
    normalize_text,
    seed_verbs_tsv,
    split_sentences,
    tokenize,
)
from . import _litnet


def tag(text):
    """Sentence records with tokens tagged by the builtin tagger."""
    return _json.loads(_litnet._tag_json(text))


def extract_relations(text, verbs_tsv=None, doc_id="doc"):
    """Relation triples found in `text`, using the seed dictionary unless a verbs.tsv text is given."""
    return _json.loads(_litnet._extract_json(text, verbs_tsv, doc_id))


def build_graph(triples, rings=4, sign_basis="eq3"):
    """graph.json document for a list of triple dicts."""
    return _json.loads(_litnet._graph_json(_json.dumps(triples), rings, sign_basis))


def render_svg(triples, mode="cluster", ego=None):
    return _litnet._svg(_json.dumps(triples), mode, ego)


def run_pipeline(config, stages=(), force=False, base_dir="."):
    """Runs pipeline stages from a config dict; returns 'stage:done|skipped:failures' lines."""
    return _litnet._run_stages(_json.dumps(config), _os.path.abspath(base_dir), list(stages), force)
