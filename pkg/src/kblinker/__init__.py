"""kblinker: an entity linking engine trained from a Wikidata-style KB dump.

The pipeline: stream the dump into a record store, compute PageRank over the
item link graph, train a unigram language model from item labels, build a
case-sensitive surface-form dictionary, then train a linear max-margin
classifier on locally-compatible features propagated through a per-document
Markov chain of candidate entities.
"""

from kblinker.records import ItemRecord, RecordStore, TypeClosure, item_id_from_qid, qid
from kblinker.evaluation import EvalReport, GoldDocument, evaluate, load_dataset, weak_match

__version__ = "0.1.0"

__all__ = [
    "ItemRecord",
    "RecordStore",
    "TypeClosure",
    "item_id_from_qid",
    "qid",
    "GoldDocument",
    "EvalReport",
    "evaluate",
    "load_dataset",
    "weak_match",
    "__version__",
]
