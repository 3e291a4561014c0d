#!/usr/bin/env python3
# Copyright 2026 The Novelscope Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the offline fixture tree. All papers, people and venues here
are fictional. Output is deterministic: rerunning produces identical bytes."""

import gzip
import hashlib
import io
import json
import random
import shutil
import tarfile
from pathlib import Path
from urllib.parse import quote

ROOT = Path(__file__).resolve().parent
HTTP = ROOT / "http"

S2_GRAPH = "https://api.semanticscholar.org/graph/v1"
S2_REC = "https://api.semanticscholar.org/recommendations/v1"
ARXIV_API = "http://export.arxiv.org/api/query"
ARXIV_EPRINT = "https://arxiv.org/e-print/"
FIELDS = "paperId,externalIds,title,abstract,authors,year,venue,url,citationCount"


def enc(s):
    return quote(s, safe="-_.~")


def s2_id(seed):
    return hashlib.sha1(seed.encode()).hexdigest()


class Index:
    def __init__(self):
        self.entries = []
        self.n = 0

    def add(self, url, body, status=200, ext="json", method="GET"):
        self.n += 1
        name = f"bodies/{self.n:03d}.{ext}"
        path = HTTP / name
        path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(body, (dict, list)):
            body = json.dumps(body, indent=1, ensure_ascii=False) + "\n"
        if isinstance(body, str):
            body = body.encode()
        path.write_bytes(body)
        self.entries.append({"method": method, "url": url, "status": status, "body_file": name})

    def write(self):
        (HTTP / "index.json").write_text(json.dumps({"entries": self.entries}, indent=1) + "\n")


def tarball(files):
    buf = io.BytesIO()
    with tarfile.open(fileobj=buf, mode="w", format=tarfile.USTAR_FORMAT) as tar:
        for name in sorted(files):
            data = files[name].encode()
            info = tarfile.TarInfo(name)
            info.size = len(data)
            info.mtime = 0
            info.mode = 0o644
            info.uname = info.gname = ""
            tar.addfile(info, io.BytesIO(data))
    out = io.BytesIO()
    with gzip.GzipFile(fileobj=out, mode="wb", mtime=0) as gz:
        gz.write(buf.getvalue())
    return out.getvalue()


def bibtex(refs):
    out = []
    for r in refs:
        authors = " and ".join(r["authors"])
        out.append(
            f"@inproceedings{{{r['key']},\n  title = {{{r['title']}}},\n  author = {{{authors}}},\n"
            f"  booktitle = {{{r['venue']}}},\n  year = {{{r['year']}}}\n}}\n"
        )
    return "\n".join(out)


def s2_record(r, arxiv_id=None):
    rec = {
        "paperId": r["paperId"],
        "externalIds": {"ArXiv": arxiv_id} if arxiv_id else {},
        "title": r["title"],
        "abstract": r.get("abstract"),
        "authors": [{"authorId": str(i + 1), "name": a} for i, a in enumerate(r["authors"])],
        "year": r["year"],
        "venue": r["venue"],
        "url": f"https://www.semanticscholar.org/paper/{r['paperId']}",
        "citationCount": r.get("citations", 0),
    }
    return rec


FIRST = ["Ada", "Bram", "Chiara", "Dmitri", "Elif", "Farid", "Greta", "Hugo", "Ines", "Jonas", "Kaori", "Lior",
         "Mirela", "Nikhil", "Oona", "Pavel", "Quinn", "Rosa", "Sven", "Talia", "Umar", "Vera", "Wen", "Yusuf"]
LAST = ["Aldana", "Brenner", "Castell", "Dunmore", "Eriksen", "Falk", "Garrow", "Hollis", "Ivers", "Jalil",
        "Kestrel", "Lundqvist", "Marsh", "Novak", "Okafor", "Pike", "Quist", "Rowan", "Sauer", "Thorne",
        "Ueda", "Voss", "Whitlock", "Yarrow"]
VENUES = ["ICLR", "NeurIPS", "ACL", "EMNLP", "Interspeech", "ICASSP", "TACL", "NAACL"]


def people(rng, n):
    return [f"{rng.choice(FIRST)} {rng.choice(LAST)}" for _ in range(n)]


def make_abstract(rng, topic, background, target):
    """A background-then-target abstract in the usual shape."""
    bg = rng.sample(background, 2)
    tg = rng.choice(target)
    return (f"{bg[0]} {bg[1]} In this work, we {tg} for {topic}. "
            f"Experiments on {rng.choice(['three', 'four', 'five', 'six'])} benchmarks show consistent gains "
            f"over strong baselines, and an analysis explains where the improvements come from.")


# ---------------------------------------------------------------- paper A

A_ID = "2403.01234"
A_TITLE = "Sparse Mixture Adapters for Low-Resource Speech Recognition"
A_ABSTRACT = (
    "Adapting large pretrained speech encoders to new languages is expensive, and full fine-tuning overfits "
    "when only a few hours of transcribed audio are available. Existing adapter methods add the same small "
    "module to every layer and ignore that languages differ in which acoustic features they need. "
    "We propose sparse mixture adapters, a parameter-efficient method that routes each frame to a few "
    "language-specific experts inside lightweight adapter layers. Across twelve low-resource languages, sparse "
    "mixture adapters reduce word error rate by 11 percent relative to standard adapters while training fewer "
    "than 2 percent of the encoder parameters."
)

A_BACKGROUND = [
    "Self-supervised speech encoders learn rich acoustic representations from unlabeled audio.",
    "Low-resource languages often have only a few hours of transcribed speech.",
    "Full fine-tuning of large speech models is costly and prone to overfitting.",
    "Parameter-efficient transfer methods keep most pretrained weights frozen.",
    "Multilingual speech recognition suffers from interference between unrelated languages.",
    "Mixture-of-experts layers increase capacity without increasing per-example compute.",
    "Routing decisions in sparse models are hard to train and often collapse to few experts.",
    "Acoustic variability across dialects makes transfer between related languages unreliable.",
]
A_TARGET = [
    "introduce a routing scheme that balances expert load",
    "propose a lightweight adapter architecture",
    "present a data augmentation recipe",
    "develop a curriculum that orders languages by similarity",
    "design a regularizer that prevents expert collapse",
    "study the scaling behaviour of adapters",
]
A_TOPICS = [
    "multilingual speech recognition", "low-resource automatic speech recognition", "speech adapters",
    "mixture-of-experts transformers", "self-supervised speech representations", "cross-lingual transfer",
    "parameter-efficient fine-tuning", "dialect robust recognition", "speech translation", "keyword spotting",
]

# key, title, year
A_REFS = [
    ("hollis2020wav", "Contrastive Pretraining of Speech Encoders from Raw Waveforms", 2020),
    ("ivers2021xls", "Cross-Lingual Speech Representations at Scale", 2021),
    ("novak2019adapt", "Residual Adapters for Efficient Transfer in Transformers", 2019),
    ("okafor2022lora", "Low-Rank Updates for Parameter-Efficient Fine-Tuning", 2022),
    ("thorne2021moe", "Switching Experts: Sparse Routing for Large Language Models", 2021),
    ("marsh2022balance", "Balanced Routing Losses for Mixture-of-Experts Training", 2022),
    ("ueda2020fleurs", "A Few-Hour Benchmark for Multilingual Speech Recognition", 2020),
    ("rowan2023lang", "Language-Specific Adapters for Multilingual Speech Recognition", 2023),
    ("falk2021interfere", "Negative Interference in Multilingual Acoustic Models", 2021),
    ("garrow2022prompt", "Prompt Tuning for Speech Encoders", 2022),
    ("brenner2018ctc", "Connectionist Temporal Classification Revisited", 2018),
    ("castell2023moeasr", "Mixture-of-Experts Speech Recognition with Shared Routers", 2023),
    ("kestrel2021spec", "Spectral Augmentation Policies for Low-Resource Speech", 2021),
    ("lundqvist2022dialect", "Dialect Robust Speech Recognition through Accent Embeddings", 2022),
    ("sauer2020conformer", "Convolution-Augmented Transformers for Speech", 2020),
    ("voss2023hyper", "Hypernetwork Adapters for Multilingual Transfer", 2023),
    ("whitlock2022collapse", "Why Expert Routing Collapses and How to Prevent It", 2022),
    ("eriksen2021few", "Few-Shot Language Adaptation of Speech Recognizers", 2021),
    ("jalil2023param", "A Survey of Parameter-Efficient Transfer for Speech", 2023),
    ("quist2019lm", "Shallow Fusion of Language Models in Low-Resource Recognition", 2019),
    ("pike2022distill", "Distilling Multilingual Speech Models into Compact Students", 2022),
    ("dunmore2023token", "Token-Level Routing for Code-Switched Speech", 2023),
]
# in refs.bib and known to the citation graph, but never cited in the text
A_UNCITED = [
    ("aldana2021vad", "Voice Activity Detection with Tiny Recurrent Models", 2021),
    ("castell2020tone", "Tone Modeling for Tonal Language Recognition", 2020),
    ("eriksen2022pseudo", "Pseudo-Labeling Unlabeled Speech in New Languages", 2022),
    ("hollis2022phone", "Universal Phone Inventories for Zero-Shot Recognition", 2022),
    ("marsh2020bpe", "Subword Units for Agglutinative Speech Recognition", 2020),
    ("novak2021quant", "Quantized Adapters for On-Device Speech Models", 2021),
    ("rowan2020multi", "Multitask Learning of Speech and Language Identification", 2020),
    ("thorne2023route", "Routing Transformers for Long Audio", 2023),
]
# in the bibliography but absent from the citation graph provider
A_BIB_ONLY = [("yarrow2017old", "An Early Study of Phone Recognition with Recurrent Networks", 2017)]

A_SECTIONS = {
    "sections/intro.tex": r"""
\section{Introduction}
\label{sec:intro}

Self-supervised speech encoders have changed how speech recognition systems are built \citep{hollis2020wav,ivers2021xls}.
A single model pretrained on thousands of hours of unlabeled audio can be fine-tuned to transcribe a new language with far less labelled data than before.
Yet for truly low-resource languages, where only a few hours of transcribed speech exist \citep{ueda2020fleurs}, full fine-tuning is both expensive and unstable.
% A first draft cited \citep{quist2019lm} here; the comparison was dropped.

Parameter-efficient methods offer a way out.
Residual adapters insert small bottleneck layers into a frozen backbone \citep{novak2019adapt}, and low-rank updates modify attention weights with few parameters \citep{okafor2022lora}.
However, adapters trained for speech apply the same module to every input frame, which limits them when languages need different acoustic cues \citep{rowan2023lang}.
Multilingual training also suffers from negative interference between unrelated languages \citep{falk2021interfere}.

We propose sparse mixture adapters, which place a small set of expert adapters in each encoder layer and route every frame to two of them.
Our contribution is threefold: a routing scheme for adapters, a load balancing regularizer that works with few training hours, and an extensive study on twelve languages.
We show that sparse mixture adapters outperform dense adapters while training fewer parameters.
""",
    "sections/related.tex": r"""
\section{Related Work}

\paragraph{Speech pretraining.}
Contrastive pretraining on raw waveforms \citep{hollis2020wav} and its cross-lingual extension \citep{ivers2021xls} form the backbone of our system.
Convolution-augmented transformers \citep{sauer2020conformer} are a common alternative encoder, and connectionist temporal classification \citep{brenner2018ctc} remains the standard training objective for such encoders.

\paragraph{Parameter-efficient transfer.}
Adapters \citep{novak2019adapt} and low-rank updates \citep{okafor2022lora} were introduced for text models and later applied to speech \citep{jalil2023param}.
Prompt tuning has also been tried for speech encoders, but it struggles on acoustic tasks with large domain shift \citep{garrow2022prompt}.
Hypernetwork adapters generate adapter weights from a language embedding \citep{voss2023hyper}; unlike our approach, they need a typological description of every target language.
Language-specific adapters \citep{rowan2023lang} train one module per language, whereas we share experts across languages.

\paragraph{Mixture of experts.}
Sparse routing lets language models grow capacity at constant compute \citep{thorne2021moe}.
Balanced routing losses \citep{marsh2022balance} keep experts busy, and we build on this idea for our regularizer.
Expert routing is known to collapse in small-data regimes \citep{whitlock2022collapse}, a drawback we address directly.
Castell et al. apply mixture-of-experts layers to speech with a router shared by all layers \citep{castell2023moeasr}, in contrast to our per-layer adapter routers.
Token-level routing has been used for code-switched speech \citep{dunmore2023token}.
%\citet{pike2022distill} is related but concerns compression.
""",
    "sections/method.tex": r"""
\section{Method}
\label{sec:method}

Our method starts from a frozen pretrained encoder \citep{ivers2021xls}.
In each transformer layer we add $E$ expert adapters, each a bottleneck network with down projection, nonlinearity and up projection as in residual adapters \citep{novak2019adapt}.

\subsection{Frame routing}
A router computes a score for every expert from the layer input and keeps the two highest scoring experts for each frame, following the top-two gating of sparse language models \citep{thorne2021moe}.
The outputs of the selected experts are weighted by the normalized router scores and added to the residual stream.
\begin{equation}
  h' = h + \sum_{e \in \mathrm{top2}(r(h))} g_e(h)\, A_e(h)
\end{equation}

\subsection{Load balancing with few hours}
We use a balancing loss adapted from prior routing work \citep{marsh2022balance} and add an entropy bonus that keeps routing diverse early in training.
Without this term, routing collapses to a single expert within a few hundred steps, the failure mode described by \citet{whitlock2022collapse}.
We train our model with connectionist temporal classification \citep{brenner2018ctc} and spectral augmentation \citep{kestrel2021spec}.

\begin{figure}[t]
\centering
\includegraphics[width=\linewidth]{figures/arch.pdf}
\caption{Sparse mixture adapters inside one encoder layer. Each frame is routed to two expert adapters.}
\label{fig:arch}
\end{figure}
""",
    "sections/experiments.tex": r"""
\section{Experiments}
\label{sec:exp}

We evaluate on twelve languages from a few-hour multilingual benchmark \citep{ueda2020fleurs}, using one to ten hours of transcribed speech per language.
We compare against full fine-tuning, residual adapters \citep{novak2019adapt}, low-rank updates \citep{okafor2022lora}, language-specific adapters \citep{rowan2023lang} and hypernetwork adapters \citep{voss2023hyper}.

\subsection{Main results}
Sparse mixture adapters reach an average word error rate of 23.4 percent, an 11 percent relative reduction over dense adapters.
The gains are largest for languages with fewer than three hours of data, where full fine-tuning overfits badly.
Compared with few-shot language adaptation \citep{eriksen2021few}, our method needs no meta-training stage.

\subsection{Ablations}
Removing the entropy bonus increases word error rate by 1.8 points and leaves most experts unused.
Routing at the utterance level instead of the frame level performs poorly on dialect-rich languages, consistent with findings on accent embeddings \citep{lundqvist2022dialect}.
We measure expert usage across languages and find that related languages share experts more often than unrelated ones.

\begin{table}[t]
\centering
\begin{tabular}{lcc}
\toprule
Method & Params & WER \\
\midrule
Adapters & 1.9\% & 26.3 \\
Ours & 1.7\% & 23.4 \\
\bottomrule
\end{tabular}
\caption{Average word error rate over twelve languages.}
\end{table}
""",
    "sections/conclusion.tex": r"""
\section{Conclusion}

We introduced sparse mixture adapters for low-resource speech recognition.
Routing frames to shared experts lets related languages pool their data while unrelated languages avoid interference.
Future work will combine our adapters with distillation into compact students \citep{pike2022distill} and with language model fusion.
""",
}

A_MAIN = r"""\documentclass{article}
\usepackage{natbib}
\usepackage{graphicx}
\title{Sparse Mixture Adapters for Low-Resource Speech Recognition}
\author{Anonymous}
\begin{document}
\maketitle
\begin{abstract}
%ABSTRACT%
\end{abstract}

\input{sections/intro}
\input{sections/related}
\input{sections/method}
\input{sections/experiments}
\input{sections/conclusion}

\bibliographystyle{plainnat}
\bibliography{refs}
\end{document}
"""

# ---------------------------------------------------------------- paper B

B_ID = "2405.05678"
B_TITLE = "Claim Graphs for Retrieval-Augmented Scientific Fact Verification"
B_ABSTRACT = (
    "Verifying scientific claims requires finding evidence spread across several papers. Retrieval-augmented "
    "verifiers treat each claim as a flat query and miss evidence for its individual parts. We present claim "
    "graphs, a method that decomposes a claim into a small graph of sub-claims, retrieves evidence for each node "
    "and aggregates node verdicts along the graph. On two scientific fact verification benchmarks, claim graphs "
    "improve macro F1 by 4.6 points over the strongest retrieval-augmented baseline."
)
B_BACKGROUND = [
    "Scientific fact verification checks claims against evidence from the research literature.",
    "Retrieval-augmented language models ground their predictions in retrieved passages.",
    "Complex claims combine several facts that may be supported by different documents.",
    "Dense retrievers struggle with the technical vocabulary of scientific papers.",
    "Claim decomposition breaks a statement into simpler questions.",
    "Graph neural networks propagate information between related pieces of evidence.",
    "Verdict aggregation over multiple evidence passages remains an open problem.",
    "Large language models hallucinate citations when asked to justify scientific claims.",
]
B_TARGET = [
    "propose a question decomposition approach",
    "introduce an evidence graph reasoning model",
    "present a retrieval method tuned on scientific abstracts",
    "develop a benchmark of compositional claims",
    "design a verifier that explains its verdicts",
    "study calibration of claim verifiers",
]
B_TOPICS = [
    "scientific fact verification", "claim decomposition", "dense retrieval of scientific text",
    "retrieval-augmented generation", "evidence aggregation", "explainable verification",
    "multi-hop question answering", "citation recommendation", "argument mining", "table-based fact checking",
]
B_REFS = [
    ("aldana2020scifact", "A Dataset of Expert-Written Scientific Claims with Evidence", 2020),
    ("brenner2021rag", "Retrieval-Augmented Generation for Knowledge-Intensive Tasks", 2021),
    ("dunmore2022decomp", "Decomposing Complex Claims into Verifiable Questions", 2022),
    ("eriksen2020dense", "Dense Passage Retrieval with Hard Negatives", 2020),
    ("falk2022graph", "Evidence Graphs for Multi-Hop Fact Checking", 2022),
    ("hollis2023llmver", "Large Language Models as Zero-Shot Fact Verifiers", 2023),
    ("ivers2021multivers", "Joint Rationale Selection and Label Prediction for Scientific Claims", 2021),
    ("jalil2022scibert", "Domain Pretraining for Scientific Text Understanding", 2022),
    ("kestrel2023halluc", "Measuring Hallucinated Citations in Language Models", 2023),
    ("marsh2021agg", "Aggregating Verdicts over Multiple Evidence Passages", 2021),
    ("novak2022multihop", "Iterative Retrieval for Multi-Hop Question Answering", 2022),
    ("okafor2023explain", "Explanations for Fact Verification: A Survey", 2023),
    ("pike2021covid", "Verifying Claims about Public Health in the Literature", 2021),
    ("rowan2022gnn", "Graph Neural Networks for Evidence Reasoning", 2022),
    ("sauer2023calib", "Calibrated Verdicts for Scientific Claim Verification", 2023),
    ("thorne2018fever", "A Large-Scale Benchmark for Fact Extraction and Verification", 2018),
]
B_BIB_ONLY = []

B_BODY = r"""\documentclass{article}
\usepackage{natbib}
\title{Claim Graphs for Retrieval-Augmented Scientific Fact Verification}
\begin{document}
\maketitle
\begin{abstract}
%ABSTRACT%
\end{abstract}

\section{Introduction}

Scientific fact verification asks whether a claim is supported or refuted by the literature \citep{aldana2020scifact,pike2021covid}.
Retrieval-augmented models first retrieve passages and then predict a verdict \citep{brenner2021rag,ivers2021multivers}.
However, a flat query built from the whole claim often fails to retrieve evidence for each of its parts.
Large language models used as zero-shot verifiers \citep{hollis2023llmver} also suffer from hallucinated citations \citep{kestrel2023halluc}.

We present claim graphs, which decompose a claim into sub-claims, retrieve evidence for each one and aggregate the results along a graph.
Our contribution is a verification pipeline whose intermediate steps can be inspected, together with a study of where decomposition helps.

\section{Related Work}

Benchmarks for fact extraction and verification \citep{thorne2018fever} started a line of work on evidence-based verification that later moved to scientific text \citep{aldana2020scifact}.
Dense retrieval with hard negatives \citep{eriksen2020dense} and domain pretraining \citep{jalil2022scibert} improve evidence recall, and we use both components.
Question decomposition \citep{dunmore2022decomp} inspired our sub-claim generation, but unlike that work we keep the dependencies between sub-claims.
Evidence graphs have been used for multi-hop fact checking \citep{falk2022graph} and graph neural networks reason over evidence \citep{rowan2022gnn}; in contrast, our graph is built from the claim rather than from the evidence.
Iterative retrieval \citep{novak2022multihop} gathers evidence in several rounds, whereas we retrieve for all nodes in parallel.
Verdict aggregation over several passages \citep{marsh2021agg} is limited to a flat set of passages.
% \citep{okafor2023explain} surveys explanations; we do not compare with it.

\section{Method}

Claim graphs have three stages: decomposition, retrieval and aggregation.
A language model decomposes the claim into at most six sub-claims linked by dependency edges.
We use a dense retriever pretrained on scientific text \citep{jalil2022scibert} to retrieve five abstracts for every sub-claim.
A verifier labels each sub-claim as supported, refuted or not enough information, following the label set of earlier benchmarks \citep{thorne2018fever}.
Node verdicts are combined by a rule that refutes the claim if any required sub-claim is refuted.

\section{Experiments}

We evaluate on two scientific fact verification benchmarks \citep{aldana2020scifact,pike2021covid} and report macro F1.
Claim graphs improve macro F1 by 4.6 points over the strongest retrieval-augmented baseline \citep{ivers2021multivers}.
The improvement is largest for claims with three or more sub-claims.
We measure calibration and find that claim graphs are better calibrated than flat verifiers \citep{sauer2023calib}.

\section{Conclusion}

Claim graphs make scientific fact verification more accurate and easier to inspect.
Decomposition errors remain the main failure mode, which future work could address with explanations \citep{okafor2023explain}.

\begin{thebibliography}{99}
%BIBITEMS%
\end{thebibliography}
\end{document}
"""

# Draft used by the abstract-only route; it has no arXiv id.
DRAFT_TITLE = "Prototype Memories for Continual Speech Recognition"
DRAFT_ABSTRACT = (
    "Speech recognizers deployed on devices must adapt to new speakers and vocabularies without forgetting "
    "earlier data. Replay buffers of raw audio are too large for on-device storage. We propose prototype "
    "memories, a compact store of acoustic class prototypes that regularizes continual fine-tuning of speech "
    "encoders. Prototype memories reduce forgetting by 40 percent on a continual recognition benchmark."
)

PDF_ID = "2406.04321"
PDF_TITLE = "Streaming Keyword Spotting with Tiny Transformers"
PDF_ABSTRACT = (
    "Always-on keyword spotting needs models that fit in a few hundred kilobytes. Transformers are accurate "
    "but large. We present a tiny streaming transformer for keyword spotting that runs in 60 kilobytes of memory "
    "and matches convolutional baselines in accuracy."
)
MISSING_ID = "2409.09999"
NO_SOURCE_ID = "2407.00002"


def reference_records(rng, refs, topics, background, target, seed):
    out = []
    for key, title, year in refs:
        out.append({
            "key": key,
            "paperId": s2_id(seed + key),
            "title": title,
            "year": year,
            "venue": rng.choice(VENUES),
            "authors": people(rng, rng.randint(2, 4)),
            "abstract": make_abstract(rng, rng.choice(topics), background, target),
            "citations": rng.randint(5, 900),
        })
    return out


def recommendation_records(rng, n, topics, background, target, seed):
    out = []
    for i in range(n):
        topic = topics[i % len(topics)]
        adj = rng.choice(["Efficient", "Robust", "Scalable", "Adaptive", "Unified", "Compositional",
                          "Lightweight", "Calibrated", "Structured", "Contrastive"])
        noun = rng.choice(["Learning", "Modeling", "Transfer", "Training", "Inference", "Reasoning"])
        title = f"{adj} {noun} for {topic[0].upper() + topic[1:]}"
        rec = {
            "paperId": s2_id(f"{seed}-rec-{i}"),
            "title": title,
            "year": rng.choice([2019, 2020, 2021, 2022, 2023, 2023, 2024, 2024, 2025]),
            "venue": rng.choice(VENUES),
            "authors": people(rng, rng.randint(1, 5)),
            "abstract": make_abstract(rng, topic, background, target),
            "citations": rng.randint(0, 300),
        }
        if i % 11 == 7:
            rec["abstract"] = None  # provider sometimes omits abstracts
        out.append(rec)
    return out


def atom_feed(records):
    parts = ['<?xml version="1.0" encoding="UTF-8"?>',
             '<feed xmlns="http://www.w3.org/2005/Atom">',
             "  <title>arXiv Query results</title>"]
    for r in records:
        parts.append("  <entry>")
        parts.append(f"    <id>http://arxiv.org/abs/{r['arxiv']}v1</id>")
        parts.append(f"    <published>{r['year']}-03-04T12:00:00Z</published>")
        parts.append(f"    <title>{r['title']}</title>")
        parts.append(f"    <summary>{r['abstract']}</summary>")
        for a in r["authors"]:
            parts.append(f"    <author><name>{a}</name></author>")
        parts.append("  </entry>")
    parts.append("</feed>")
    return "\n".join(parts) + "\n"


def paper_endpoints(idx, arxiv_id, main, refs, recs, unresolved=0):
    sid = enc(f"arXiv:{arxiv_id}")
    idx.add(f"{S2_GRAPH}/paper/{sid}?fields={FIELDS}", s2_record(main, arxiv_id))
    data = [{"citedPaper": s2_record(r)} for r in refs]
    for i in range(unresolved):
        data.append({"citedPaper": {"paperId": None, "title": f"Unresolved reference {i + 1}"}})
    idx.add(f"{S2_GRAPH}/paper/{sid}/references?fields={FIELDS}&limit=1000", {"offset": 0, "data": data})
    for n in (10, 20, 30):
        # Like the live API, a response never holds more than `limit` items.
        idx.add(f"{S2_REC}/papers/forpaper/{enc(main['paperId'])}?limit={n}&fields={FIELDS}",
                {"recommendedPapers": [s2_record(r) for r in recs[:n]]})


def build_http():
    if HTTP.exists():
        shutil.rmtree(HTTP)
    idx = Index()

    # paper A
    rng = random.Random(1234)
    a_refs = reference_records(rng, A_REFS + A_UNCITED, A_TOPICS, A_BACKGROUND, A_TARGET, "a")
    a_bib_only = reference_records(rng, A_BIB_ONLY, A_TOPICS, A_BACKGROUND, A_TARGET, "a")
    a_recs = recommendation_records(rng, 36, A_TOPICS, A_BACKGROUND, A_TARGET, "a")
    a_main = {"paperId": s2_id("paper-a"), "title": A_TITLE, "year": 2024, "venue": "ICLR",
              "authors": ["Mirela Okafor", "Sven Thorne", "Kaori Ueda"], "abstract": A_ABSTRACT, "citations": 17}
    # The provider lists the seed itself and one duplicate among recommendations.
    a_recs.insert(3, dict(a_main))
    a_recs.insert(9, dict(a_recs[5]))
    paper_endpoints(idx, A_ID, a_main, a_refs, a_recs, unresolved=2)
    files = dict(A_SECTIONS)
    files["main.tex"] = A_MAIN.replace("%ABSTRACT%", A_ABSTRACT)
    files["refs.bib"] = bibtex(a_refs + a_bib_only)
    files["figures/README.txt"] = "figures omitted from the fixture\n"
    idx.add(f"{ARXIV_EPRINT}{A_ID}", tarball(files), ext="tar.gz")

    # paper B: single file with an inline bibliography
    rng = random.Random(5678)
    b_refs = reference_records(rng, B_REFS, B_TOPICS, B_BACKGROUND, B_TARGET, "b")
    b_recs = recommendation_records(rng, 34, B_TOPICS, B_BACKGROUND, B_TARGET, "b")
    b_main = {"paperId": s2_id("paper-b"), "title": B_TITLE, "year": 2024, "venue": "ACL",
              "authors": ["Ines Castell", "Umar Pike"], "abstract": B_ABSTRACT, "citations": 9}
    paper_endpoints(idx, B_ID, b_main, b_refs, b_recs)
    def bibitem(i, r):
        head = f"\\bibitem[{r['authors'][0].split()[-1]}({r['year']})]{{{r['key']}}}\n{', '.join(r['authors'])}."
        if i % 5 == 0:  # free-form entry without \newblock separators
            return f"{head} {r['title']}. In \\emph{{{r['venue']}}}, {r['year']}."
        return f"{head}\n\\newblock {r['title']}.\n\\newblock In \\emph{{{r['venue']}}}, {r['year']}."
    items = "\n".join(bibitem(i, r) for i, r in enumerate(b_refs))
    src = B_BODY.replace("%ABSTRACT%", B_ABSTRACT).replace("%BIBITEMS%", items)
    out = io.BytesIO()
    with gzip.GzipFile(fileobj=out, mode="wb", mtime=0) as gz:
        gz.write(src.encode())
    idx.add(f"{ARXIV_EPRINT}{B_ID}", out.getvalue(), ext="tex.gz")

    # PDF-only submission: metadata works, source does not.
    rng = random.Random(4321)
    p_main = {"paperId": s2_id("paper-pdf"), "title": PDF_TITLE, "year": 2024, "venue": "Interspeech",
              "authors": ["Hugo Marsh"], "abstract": PDF_ABSTRACT, "citations": 2}
    p_recs = recommendation_records(rng, 12, A_TOPICS, A_BACKGROUND, A_TARGET, "p")
    paper_endpoints(idx, PDF_ID, p_main, [], p_recs)
    idx.add(f"{ARXIV_EPRINT}{PDF_ID}", b"%PDF-1.5\n%fixture\n", ext="pdf")

    # Source missing entirely (404 from the e-print endpoint).
    n_main = {"paperId": s2_id("paper-nosrc"), "title": "A Paper Without Source", "year": 2024,
              "venue": "arXiv", "authors": ["Vera Voss"], "abstract": "We study something without sources.",
              "citations": 0}
    paper_endpoints(idx, NO_SOURCE_ID, n_main, [], p_recs[:4])
    idx.add(f"{ARXIV_EPRINT}{NO_SOURCE_ID}", "not found\n", status=404, ext="txt")

    # Unknown paper.
    idx.add(f"{S2_GRAPH}/paper/{enc('arXiv:' + MISSING_ID)}?fields={FIELDS}",
            {"error": "Paper with id arXiv:2409.09999 not found"}, status=404)

    # arXiv title search.
    feed_a = [{"arxiv": A_ID, "year": 2024, "title": A_TITLE, "abstract": A_ABSTRACT, "authors": a_main["authors"]},
              {"arxiv": "2310.04455", "year": 2023, "title": "Sparse Adapters for Speech Translation",
               "abstract": "We adapt speech translation models with sparse adapters.", "authors": ["Lior Falk"]},
              {"arxiv": PDF_ID, "year": 2024, "title": PDF_TITLE, "abstract": PDF_ABSTRACT, "authors": ["Hugo Marsh"]},
              {"arxiv": "2208.11223", "year": 2022, "title": "Sparse Adapters Revisited",
               "abstract": "We revisit sparse adapters for text classification.", "authors": ["Rosa Novak"]},
              {"arxiv": "2111.00042", "year": 2021, "title": "Learning Sparse Adapters with Lottery Tickets",
               "abstract": "We prune adapters to sparse subnetworks.", "authors": ["Talia Quist", "Jonas Pike"]},
              {"arxiv": "cs/0601001", "year": 2006, "title": "Sparse Adapters for Hidden Markov Models",
               "abstract": "An early study of sparse adaptation for acoustic models.", "authors": ["Greta Hollis"]}]
    for q in ("sparse adapters", "Sparse Mixture Adapters"):
        for limit in (10, 5):
            idx.add(f"{ARXIV_API}?search_query={enc('ti:' + chr(34) + q + chr(34))}&start=0&max_results={limit}",
                    atom_feed(feed_a[:limit]), ext="xml")
    feed_b = [{"arxiv": B_ID, "year": 2024, "title": B_TITLE, "abstract": B_ABSTRACT, "authors": b_main["authors"]}]
    idx.add(f"{ARXIV_API}?search_query={enc('ti:' + chr(34) + 'claim graphs' + chr(34))}&start=0&max_results=10",
            atom_feed(feed_b), ext="xml")
    idx.add(f"{ARXIV_API}?search_query={enc('ti:' + chr(34) + 'no such paper' + chr(34))}&start=0&max_results=10",
            atom_feed([]), ext="xml")

    # Semantic Scholar keyword search for the abstract-only route.
    rng = random.Random(99)
    d_recs = recommendation_records(rng, 30, A_TOPICS, A_BACKGROUND, A_TARGET, "d")
    for title, recs in ((DRAFT_TITLE, d_recs), (A_TITLE, a_recs)):
        for n in (10, 30):
            idx.add(f"{S2_GRAPH}/paper/search?query={enc(title)}&limit={n}&fields={FIELDS}",
                    {"total": len(recs), "offset": 0, "data": [s2_record(r) for r in recs]})
    idx.write()

    (ROOT / "requests").mkdir(exist_ok=True)
    (ROOT / "requests" / "draft_abstract.json").write_text(
        json.dumps({"title": DRAFT_TITLE, "abstract": DRAFT_ABSTRACT}, indent=2) + "\n")


# ---------------------------------------------------------------- citation corpus

CORPUS_MAIN = r"""\documentclass{article}
\newcommand{\ours}{\textsc{Planted}}
\begin{document}
\begin{abstract}
We plant citations in awkward places and check that every one is found.
\end{abstract}

\section{Introduction}
Early parsers missed citations inside footnotes \citep{alpha2019}.
Two sources agree on this point \citep[see][p.~4]{beta2020,gamma2021}.
% A commented citation \cite{omega1999} must never be extracted.
Authors sometimes write \citet{delta2018} in running text.
This sentence mentions 50\% of cases and cites \cite{epsilon2022}. % trailing comment \cite{omega1999}

\input{body}

\section{Discussion}
\include{extra/discussion}
\end{document}
"""

CORPUS_BODY = r"""\section{Method}
Our tokenizer follows prior work \citep{zeta2017} closely.
%\citep{omega1999,alpha2019} commented out entirely.
The parser handles starred variants \citep*{eta2020} and capitalized forms \Citet{theta2021}.
Parenthetical styles such as \parencite{iota2016} also count.
\begin{comment}
This block cites \cite{omega1999} and is ignored.
\end{comment}
"""

CORPUS_DISCUSSION = r"""Related tools \citealp{kappa2015} and \textcite{lambda2023} were compared.
Finally, \citep{mu2024} closes the loop.
"""

CORPUS_KEYS = [("alpha2019", 2019), ("beta2020", 2020), ("gamma2021", 2021), ("delta2018", 2018),
               ("epsilon2022", 2022), ("zeta2017", 2017), ("eta2020", 2020), ("theta2021", 2021),
               ("iota2016", 2016), ("kappa2015", 2015), ("lambda2023", 2023), ("mu2024", 2024),
               ("omega1999", 1999)]
CORPUS_BIB = "\n".join(
    f"@article{{{k},\n  title = {{Planted Reference {k.title()}}},\n  author = {{Doe, Jane}},\n  year = {{{y}}}\n}}\n"
    for k, y in CORPUS_KEYS)

# One row per planted (key, sentence) context: the key and a fragment that
# only its enclosing sentence contains.
CORPUS_PLANTED = [
    ("alpha2019", "Early parsers missed citations inside footnotes"),
    ("beta2020", "Two sources agree on this point"),
    ("gamma2021", "Two sources agree on this point"),
    ("delta2018", "Authors sometimes write"),
    ("epsilon2022", "mentions 50% of cases"),
    ("zeta2017", "Our tokenizer follows prior work"),
    ("eta2020", "The parser handles starred variants"),
    ("theta2021", "The parser handles starred variants"),
    ("iota2016", "Parenthetical styles such as"),
    ("kappa2015", "Related tools"),
    ("lambda2023", "Related tools"),
    ("mu2024", "closes the loop"),
]


def build_corpus():
    d = ROOT / "latex_corpus"
    if d.exists():
        shutil.rmtree(d)
    files = {"main.tex": CORPUS_MAIN, "body.tex": CORPUS_BODY, "extra/discussion.tex": CORPUS_DISCUSSION,
             "refs.bib": CORPUS_BIB}
    for name, content in files.items():
        (d / name).parent.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(content)
    (ROOT / "latex_corpus.tar.gz").write_bytes(tarball(files))
    assert len(CORPUS_PLANTED) == 12
    planted = [{"key": k, "fragment": f} for k, f in CORPUS_PLANTED]
    (ROOT / "latex_corpus_planted.json").write_text(
        json.dumps({"planted": planted, "commented_keys": ["omega1999"]}, indent=2) + "\n")


# ---------------------------------------------------------------- ground truth

YEARLY_COUNTS = [(2022, 534, 450), (2023, 688, 555), (2024, 929, 549), (2025, 912, 456)]


def novel_scores(rng):
    return rng.choice([[4, 4, 3], [4, 5], [5, 4, 4, 3], [4, 4], [5, 5, 3], [3, 4, 4, 5], [4], [4, 5, 2]])


def not_novel_scores(rng):
    return rng.choice([[3, 4], [2, 3, 3], [3, 3, 4], [1, 2], [3], [2, 4, 3, 3], [4, 3, 3, 5], [3, 3]])


def build_ground_truth():
    d = ROOT / "ground_truth"
    d.mkdir(exist_ok=True)
    rng = random.Random(2025)
    lines = []
    for year, count, novel in YEARLY_COUNTS:
        flags = [True] * novel + [False] * (count - novel)
        rng.shuffle(flags)
        for i, f in enumerate(flags):
            scores = novel_scores(rng) if f else not_novel_scores(rng)
            rng.shuffle(scores)
            lines.append(json.dumps({"id": f"or-{year}-{i + 1:04d}", "scores": scores, "venue": "ICLR",
                                     "year": year}))
    (d / "yearly_labels.jsonl").write_text("\n".join(lines) + "\n")
    pair = [{"id": "paper-a", "scores": [4, 4, 5], "venue": "ICLR", "year": 2024, "arxiv_id": A_ID},
            {"id": "paper-b", "scores": [3, 3, 4], "venue": "ACL", "year": 2024, "arxiv_id": B_ID}]
    (d / "fixture_pair.jsonl").write_text("\n".join(json.dumps(p) for p in pair) + "\n")


# ---------------------------------------------------------------- rationales

def build_rationales():
    d = ROOT / "rationales"
    d.mkdir(exist_ok=True)
    rationales = {
        "human": (
            "The paper routes speech frames to shared expert adapters, which is a new combination of "
            "mixture-of-experts routing and adapters. The closest prior work trains one adapter per language "
            "and cannot share capacity between related languages; hypernetwork adapters need typological "
            "features. The entropy bonus addressing routing collapse in low-data regimes is specific and well "
            "motivated, and the twelve-language study with one to ten hours per language supports the claim. "
            "Originality is moderate to high."),
        "basic": "The paper proposes a new adapter method for speech. It seems novel and performs well.",
        "pipeline": (
            "The paper combines sparse routing with adapters for low-resource speech recognition. Related "
            "adapter work applies one dense module per layer, and mixture-of-experts speech models share a "
            "single router, so frame-level routing inside adapters is new. The balancing regularizer reuses "
            "known losses. Overall the contribution is a useful but incremental combination."),
    }
    (d / "systems.json").write_text(json.dumps(rationales, indent=2) + "\n")


# ---------------------------------------------------------------- sentences

# Hand-annotated: each case is the list of sentences; the input paragraph is
# their space-joined concatenation.
SEGMENTATION = [
    ["We use the method of Smith et al. to train the model.", "It converges quickly."],
    ["Results are shown in Fig. 3.", "They confirm the trend."],
    ["See Sec. 4 for details.", "The appendix has more."],
    ["The model, i.e. the encoder, is frozen.", "Only adapters train."],
    ["Several tasks, e.g. parsing and tagging, benefit.", "Others do not."],
    ["J. R. R. Tolkien wrote about languages.", "Linguists still cite him."],
    ["Accuracy rose to 93.5 percent.", "Recall fell slightly."],
    ["Does it generalize?", "We test on three domains."],
    ["It works!", "Surprisingly, it also scales."],
    ["The value is approx. 3 in most cases.", "Outliers exist."],
    ["We compare against Eq. 2 and Tab. 1.", "Both agree."],
    ["This holds for version 2.0 of the toolkit.", "Later versions differ."],
    ["Prior work (cf. Jones) disagrees.", "We revisit the question."],
    ["The corpus has 1.2 million sentences.", "Each is tokenized."],
    ["We thank Dr. Brown for comments.", "Errors are ours."],
    ["Training used vs. baselines the same budget.", "All runs converged."],
    ["The set includes apples, pears, etc. and more.", "It is balanced."],
    ["Text follows.", "Another sentence.", "A third one."],
    ["No terminal punctuation here"],
    ["The model uses ⟨cite:a2020⟩ as a backbone.", "It also uses ⟨cite:b2021⟩."],
    ["A single sentence ends here."],
    ["Scores improve by 4.6 points.", "The gain is significant."],
    ["We use et al. citations.", "Then we stop."],
    ["Prof. Green proposed it in 1999.", "It was adopted widely."],
    ["The U.S. dataset is larger.", "It covers more dialects."],
    ["We report the mean over five seeds.", "Variance is low."],
    ["Fig. 2 and Figs. 3 to 5 show ablations.", "They are consistent."],
    ["The loss drops (see Eq. 4).", "Training then stabilizes."],
    ["Is this surprising?", "Not really.", "It matches theory."],
    ["We release code.", "The license is permissive."],
    ["The method of Lee et al. (2020) is a baseline.", "We improve on it."],
    ["The vocabulary is 32k tokens.", "Rare words are split."],
    ["Experiments ran on 8 GPUs.", "Each run took 3 hours."],
    ["It is fast, i.e., under 10 ms per frame.", "Memory is small."],
    ["Results: see Table 2.", "Baselines are weaker."],
    ["Accuracy is 0.73.", "Done."],
    ["The claim holds.", "(We verify it below.)"],
    ["Word error rate fell from 26.3 to 23.4.", "That is an 11 percent reduction."],
    ["Vol. 3 of the series covers it.", "No. 7 does not."],
    ["A. Turing asked whether machines think.", "The question remains."],
    ["Models were trained with Adam.", "No schedule was used."],
    ["We show that the bound is tight.", "The proof is in the appendix."],
    ["Dialects vary widely.", "Accents vary too.", "Both matter."],
    ["Performance on the dev. set was stable.", "Test results follow."],
    ["The approach is simple.", "It needs no tuning.", "It runs anywhere."],
    ["Our code is at https://example.org/code.", "It is documented."],
    ["Gains hold across seeds.", "See Fig. 5 for variance."],
    ["The parser treats Mr. and Mrs. correctly.", "It splits here."],
    ["Ref. 12 gives the proof w.r.t. the norm.", "We reuse it."],
    ["Everything ends here."],
]


def build_segmentation():
    d = ROOT / "sentences"
    d.mkdir(exist_ok=True)
    assert len(SEGMENTATION) == 50
    cases = [{"text": " ".join(s), "sentences": s} for s in SEGMENTATION]
    (d / "segmentation.json").write_text(json.dumps(cases, indent=2, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    build_http()
    build_corpus()
    build_ground_truth()
    build_rationales()
    build_segmentation()
