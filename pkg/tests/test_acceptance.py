"""End-to-end acceptance gate.

Each test prints one PASS line with the measured quantities. The heavier
tests share session-scoped fixtures: a seeded synthetic corpus, one
embedding table, and six trained classifier stacks.
"""
import itertools

import numpy as np
import pytest

from occaudit.audit import (
    gap_imbalance_correlation,
    gap_table,
    probe_accuracy,
    swap_audit,
    tp_composition,
    word_gender_scatter,
)
from occaudit.cli import main
from occaudit.corpus import (
    Biography,
    default_lexicon,
    dedup,
    extract_records,
    balanced_subsample,
    stratified_split,
)
from occaudit.linear import LinearConfig, binary_loss_and_grad
from occaudit.pipeline import predict_records, record_text, train_stack
from occaudit.proxy import aggregate_attention, proxy_candidates
from occaudit.represent import build_vocab, synth_embeddings, tokenize
from occaudit.rnn import (
    RnnConfig,
    dataset_loss,
    init_model,
    param_arrays,
    seq_loss_and_grads,
)
from occaudit.scrub import swap_text
from occaudit.simulate import GapRegression, fit_gap_regression, run, step
from occaudit.synthetic import PROXY_TOKEN, SynthConfig, generate_corpus, write_corpus


# ---------------------------------------------------------------- fixtures

RATIOS = (0.5, 0.05, 0.45)


def _extract(cfg: SynthConfig):
    records, _ = extract_records(generate_corpus(cfg), default_lexicon())
    return dedup(records)


@pytest.fixture(scope="session")
def splits():
    return stratified_split(_extract(SynthConfig(n_per_occupation=600, seed=0)),
                            RATIOS, seed=0)


@pytest.fixture(scope="session")
def table(splits):
    texts = [tokenize(b.feature_text) for b in splits.train]
    vocab = build_vocab(texts, min_freq=5)
    return synth_embeddings(vocab, dim=50, seed=0)


STACK_CONFIGS = {
    "bow": dict(min_freq=5, linear_config=LinearConfig(lam=0.1, max_epochs=300)),
    "we": dict(linear_config=LinearConfig(lam=0.0, max_epochs=8000)),
    "dnn": dict(rnn_config=RnnConfig(hidden=16, attn_dim=16, lr=2.0, epochs=30,
                                     batch_size=32, seed=0)),
}


@pytest.fixture(scope="session")
def stack_results(splits, table):
    """(accuracy, gap table, stack) per (representation, condition)."""
    golds = [b.occupation for b in splits.test]
    genders = [b.gender for b in splits.test]
    out = {}
    for rep, kwargs in STACK_CONFIGS.items():
        for cond in ("with", "without"):
            stack = train_stack(splits.train, rep, cond, table=table, **kwargs)
            preds = predict_records(stack, splits.test, table)
            acc = sum(p == g for p, g in zip(preds, golds)) / len(golds)
            out[(rep, cond)] = (acc, gap_table(preds, golds, genders), stack)
    return out


@pytest.fixture(scope="session")
def probe_splits(splits):
    return balanced_subsample(splits, min_per_cell=55, per_cell_train=55, seed=0)


# ----------------------------------------------------- closed-form criteria

def test_surgeon_true_positive_composition():
    value = tp_composition(0.146, 0.545, 0.71)
    assert value == pytest.approx(0.116, abs=0.0005)
    print(f"\nPASS [1] surgeon true-positive composition {value:.4f} = 0.116 +/- 0.0005")


def test_negative_gap_always_shrinks_composition():
    pis = np.arange(0.05, 0.4501, 0.05)
    tprs = np.arange(0.1, 1.001, 0.1)
    checked = 0
    for pi, tpr_g, tpr_other in itertools.product(pis, tprs, tprs):
        if tpr_g - tpr_other >= 0:
            continue
        assert pi - tp_composition(pi, tpr_g, tpr_other) > 1e-12
        checked += 1
    assert checked > 0
    print(f"\nPASS [2] composition < imbalance in {checked}/{checked} "
          "negative-gap grid cases")


def test_gradients_match_finite_differences():
    # linear binary loss
    rng = np.random.default_rng(0)
    x = rng.standard_normal((25, 6))
    t = (rng.random(25) > 0.5).astype(float)
    w = rng.standard_normal(6) * 0.5
    b = -0.2
    _, gw, gb = binary_loss_and_grad(w, b, x, t, 0.3)
    eps = 1e-5
    worst_linear = 0.0
    for i in range(len(w)):
        wp, wm = w.copy(), w.copy()
        wp[i] += eps
        wm[i] -= eps
        num = (binary_loss_and_grad(wp, b, x, t, 0.3)[0]
               - binary_loss_and_grad(wm, b, x, t, 0.3)[0]) / (2 * eps)
        worst_linear = max(worst_linear, abs(gw[i] - num) / max(abs(num), 1e-8))
    num_b = (binary_loss_and_grad(w, b + eps, x, t, 0.3)[0]
             - binary_loss_and_grad(w, b - eps, x, t, 0.3)[0]) / (2 * eps)
    worst_linear = max(worst_linear, abs(gb - num_b) / max(abs(num_b), 1e-8))
    assert worst_linear < 1e-6

    # full recurrent model with attention, T <= 4, H <= 3, C = 2
    rng = np.random.default_rng(3)
    model = init_model(["a", "b"], 2, RnnConfig(hidden=3, attn_dim=2, seed=3), rng)
    sequences = [rng.standard_normal((4, 2)), rng.standard_normal((3, 2))]
    targets = [0, 1]
    grads = None
    for emb, y in zip(sequences, targets):
        _, g = seq_loss_and_grads(model, emb, y)
        if grads is None:
            grads = {k: v.copy() for k, v in g.items()}
        else:
            for k in grads:
                grads[k] += g[k]
    for k in grads:
        grads[k] /= len(sequences)
    worst_rnn = 0.0
    for name, arr in param_arrays(model).items():
        flat = arr.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            lp = dataset_loss(model, sequences, targets)
            flat[i] = orig - eps
            lm = dataset_loss(model, sequences, targets)
            flat[i] = orig
            num = (lp - lm) / (2 * eps)
            ana = grads[name].reshape(-1)[i]
            worst_rnn = max(worst_rnn, abs(ana - num) / max(abs(num), abs(ana), 1e-8))
    assert worst_rnn < 1e-4
    print(f"\nPASS [3] gradient checks: linear max rel err {worst_linear:.2e} < 1e-6, "
          f"recurrent {worst_rnn:.2e} < 1e-4")


# --------------------------------------------------------- counting oracles

def _random_metric_fixture(rng):
    occs = ["surgeon", "nurse", "attorney"]
    n = int(rng.integers(10, 201))
    records = []
    for i in range(n):
        gender = "female" if rng.random() < 0.5 else "male"
        pron = "she" if gender == "female" else "he"
        words = ["alpha", "beta", "gamma", "delta"]
        body = " ".join(words[j] for j in rng.integers(0, 4, size=4))
        records.append(Biography(
            first="Ann" if gender == "female" else "Bob", middle=None,
            last=f"L{i}", occupation=occs[int(rng.integers(3))], gender=gender,
            full_text="", feature_text=f"{pron} studies {body}",
        ))
    preds = [occs[int(rng.integers(3))] for _ in records]
    return records, preds, occs


def test_metrics_match_brute_force_oracles():
    rng = np.random.default_rng(42)
    occs3 = None
    for _ in range(100):
        records, preds, occs3 = _random_metric_fixture(rng)
        golds = [b.occupation for b in records]
        genders = [b.gender for b in records]

        table = gap_table(preds, golds, genders)
        for row in table.rows:
            for gender, tpr, n_cell in (("female", row.tpr_female, row.n_female),
                                        ("male", row.tpr_male, row.n_male)):
                idx = [i for i in range(len(records))
                       if golds[i] == row.occupation and genders[i] == gender]
                assert n_cell == len(idx)
                if not idx:
                    assert tpr is None
                else:
                    assert tpr == sum(preds[i] == golds[i] for i in idx) / len(idx)

        # deterministic text-sensitive predictor for the counterfactual audit
        def predict(text):
            return occs3[sum(ord(c) for c in text) % 3]

        report = swap_audit(predict, records, min_support=1)
        pair_oracle, total_oracle, changed = {}, {}, 0
        for bio in records:
            orig = predict(bio.feature_text)
            flipped = predict(swap_text(bio.feature_text, bio.first))
            if orig != flipped:
                changed += 1
            if flipped == bio.occupation and orig != bio.occupation:
                key = (bio.gender, orig, bio.occupation)
                pair_oracle[key] = pair_oracle.get(key, 0) + 1
                tkey = (bio.gender, bio.occupation)
                total_oracle[tkey] = total_oracle.get(tkey, 0) + 1
        assert report.n_changed == changed
        assert report.pair_counts == pair_oracle
        assert report.total_counts == total_oracle

        token_lists = [tokenize(b.feature_text) for b in records]
        vocab = build_vocab(token_lists, min_freq=1)
        scatter = word_gender_scatter(token_lists, genders, vocab)
        female = np.array([1.0 if g == "female" else 0.0 for g in genders])
        for p in scatter.points:
            presence = np.array([1.0 if p.token in set(t) else 0.0
                                 for t in token_lists])
            fc, pc = female - female.mean(), presence - presence.mean()
            denom = np.sqrt((fc @ fc) * (pc @ pc))
            expect = 0.0 if denom == 0 else float(pc @ fc / denom)
            assert p.corr_female == pytest.approx(expect, abs=1e-12)
    print("\nPASS [4] gap table, swap counts, and word-gender scatter match "
          "brute-force oracles on 100 random fixtures")


# ------------------------------------------------------- compounding dynamics

def test_compounding_dynamics():
    # negative fitted gap: every trajectory strictly decreases for 10 steps
    reg = fit_gap_regression([(0.1, -0.21), (0.3, -0.13), (0.5, -0.05)])
    for pi0 in (0.1, 0.2, 0.3, 0.4):
        trace = run(pi0, 10, reg)
        centrals = [s.central for s in trace.steps]
        assert all(b < a for a, b in zip(centrals, centrals[1:]))

    # zero gap is an exact fixed point
    flat = GapRegression(slope=0.0, intercept=0.0, rss=0.0, n_points=2)
    assert [s.central for s in run(0.3, 10, flat).steps] == [0.3] * 11

    # non-degenerate band: different feasible TPR pairs move the share
    # differently under the same -0.2 gap
    a = step(0.3, 0.6, -0.2)  # complementary TPR 0.8
    b = step(0.3, 0.7, -0.2)  # complementary TPR 0.9
    assert a != b
    print(f"\nPASS [5] compounding dynamics: decreasing trajectories, exact "
          f"fixed point, band spread |{a:.4f} - {b:.4f}| > 0")


# --------------------------------------------------- end-to-end bias criteria

def test_synthetic_bias_reproduction(stack_results):
    lines = []
    for rep in STACK_CONFIGS:
        acc_w, gaps_w, _ = stack_results[(rep, "with")]
        acc_o, gaps_o, _ = stack_results[(rep, "without")]
        r = gap_imbalance_correlation(gaps_w)
        reduction = (gaps_w.mean_abs_gap() - gaps_o.mean_abs_gap()) / gaps_w.mean_abs_gap()
        delta = abs(acc_w - acc_o)
        assert r > 0.5, f"{rep}: gap-imbalance correlation {r:.3f} <= 0.5"
        assert reduction >= 0.20, f"{rep}: scrubbing reduced mean |gap| by {reduction:.1%}"
        assert delta < 0.02, f"{rep}: accuracy moved {delta:.1%} under scrubbing"
        lines.append(f"{rep} r={r:.3f} reduction={reduction:.1%} delta={delta:.2%}")
    print("\nPASS [6] bias reproduction: " + "; ".join(lines))


def test_gender_probe_accuracy(probe_splits):
    probe_cfg = dict(min_freq=2, linear_config=LinearConfig(lam=0.1, max_epochs=300))
    stack = train_stack(probe_splits.train, "bow", "without", target="gender",
                        **probe_cfg)
    preds = predict_records(stack, probe_splits.test)
    acc_signal = probe_accuracy(preds, [b.gender for b in probe_splits.test])
    assert acc_signal > 0.55

    # regenerating the corpus without any gender-correlated proxy drives the
    # probe back to chance
    neutral = stratified_split(
        _extract(SynthConfig(n_per_occupation=1000, gender_signal=False, seed=1)),
        RATIOS, seed=0,
    )
    neutral_probe = balanced_subsample(neutral, min_per_cell=90, per_cell_train=90,
                                       seed=0)
    stack0 = train_stack(neutral_probe.train, "bow", "without", target="gender",
                         **probe_cfg)
    preds0 = predict_records(stack0, neutral_probe.test)
    acc_neutral = probe_accuracy(preds0, [b.gender for b in neutral_probe.test])
    assert 0.47 <= acc_neutral <= 0.53
    print(f"\nPASS [7] gender probe: {acc_signal:.3f} > 0.55 with planted proxy, "
          f"{acc_neutral:.3f} within 0.50 +/- 0.03 without signal")


def test_proxy_detection(stack_results, probe_splits, table):
    scrubbed_test = [tokenize(record_text(b, "without")) for b in probe_splits.test]
    ranks = []
    for seed in (0, 1, 2):
        cfg = RnnConfig(hidden=16, attn_dim=16, lr=2.0, lr_decay=1.0,
                        epochs=40, batch_size=16, seed=seed)
        stack = train_stack(probe_splits.train, "dnn", "without", target="gender",
                            table=table, rnn_config=cfg)
        agg = aggregate_attention(stack.model, scrubbed_test, table)
        candidates = proxy_candidates(agg, 5)
        ranks.append(candidates[0] if candidates else None)
    top_count = ranks.count(PROXY_TOKEN)
    assert top_count >= 2, f"proxy token ranked first in only {top_count}/3 runs"

    # occupation classifiers attend the proxy more once indicators are gone
    means = {}
    for cond in ("with", "without"):
        _, _, stack = stack_results[("dnn", cond)]
        toks = [tokenize(record_text(b, cond))
                for b in probe_splits.test]
        means[cond] = aggregate_attention(stack.model, toks, table).mean(PROXY_TOKEN)
    assert means["without"] > means["with"]
    print(f"\nPASS [8] proxy detection: '{PROXY_TOKEN}' top-ranked in "
          f"{top_count}/3 runs; occupation attention "
          f"{means['without']:.2e} > {means['with']:.2e} once scrubbed")


# ----------------------------------------------------- pipeline determinism

def test_pipeline_commands_deterministic(tmp_path):
    corpus = tmp_path / "corpus.txt"
    write_corpus(generate_corpus(SynthConfig(n_per_occupation=60, seed=0)), corpus)
    outputs = []
    for tag in ("a", "b"):
        d = tmp_path / tag
        d.mkdir()
        assert main(["extract", str(corpus), "--output", str(d / "records.jsonl"),
                     "--stats", str(d / "stats.json")]) == 0
        assert main(["split", "--input", str(d / "records.jsonl"),
                     "--output-dir", str(d / "splits"), "--seed", "0"]) == 0
        assert main(["train", "--train", str(d / "splits" / "train.jsonl"),
                     "--rep", "bow", "--min-freq", "2", "--lam", "0.1",
                     "--model-out", str(d / "model.json")]) == 0
        assert main(["audit", "--model", str(d / "model.json"),
                     "--data", str(d / "splits" / "test.jsonl"),
                     "--output-dir", str(d / "audit"), "--min-freq", "2"]) == 0
        outputs.append(d)
    a, b = outputs
    compared = 0
    for rel in ("records.jsonl", "stats.json", "splits/train.jsonl",
                "splits/test.jsonl", "model.json", "audit/gaps.csv",
                "audit/gaps.svg", "audit/words.csv", "audit/audit.json"):
        assert (a / rel).read_bytes() == (b / rel).read_bytes(), rel
        compared += 1
    print(f"\nPASS [9] determinism: {compared} artifacts byte-identical across "
          "repeated extract/split/train/audit runs")


# ----------------------------------------------------------- corpus contracts

def _bio(first, middle, last, occ, text_len):
    return Biography(first=first, middle=middle, last=last, occupation=occ,
                     gender="female", full_text="x" * text_len,
                     feature_text="she works")


def test_corpus_dedup_and_split_rules():
    # middle-name prefix and absent-middle records collapse to one person
    group = [
        _bio("Ada", None, "Lovelace", "professor", 10),
        _bio("Ada", "B.", "Lovelace", "professor", 30),
        _bio("Ada", "Byron", "Lovelace", "professor", 20),
    ]
    kept = dedup(group)
    assert len(kept) == 1
    assert kept[0].full_text == "x" * 30  # longest biography wins

    # incompatible middles stay separate
    distinct = [
        _bio("Ada", "B.", "Lovelace", "professor", 10),
        _bio("Ada", "K.", "Lovelace", "professor", 10),
    ]
    assert len(dedup(distinct)) == 2

    # 65/10/25 stratification is exact per occupation on 20 + 40 records
    records = ([_bio(f"A{i}", None, f"L{i}", "nurse", 5) for i in range(20)]
               + [_bio(f"B{i}", None, f"M{i}", "surgeon", 5) for i in range(40)])
    split = stratified_split(records, (0.65, 0.10, 0.25), seed=0)
    for occ, n in (("nurse", 20), ("surgeon", 40)):
        sizes = tuple(sum(1 for r in part if r.occupation == occ)
                      for part in (split.train, split.validation, split.test))
        assert sizes == (int(0.65 * n), int(0.10 * n), int(0.25 * n))
    print("\nPASS [10] corpus rules: prefix/absent-middle dedup and exact "
          "65/10/25 stratification verified")
