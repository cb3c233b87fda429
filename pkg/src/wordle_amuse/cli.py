"""Command-line interface.

Subcommands::

    parse            raw share text -> games JSONL
    funniness-train  fit the word-funniness model, write model + reports
    features         games + labels -> per-game features CSV
    train            features CSV -> classifier + evaluation + inference
    compare          likelihood-ratio test of a nested feature set
    kappa            annotations CSV -> pairwise agreement matrix
    score            score games with a trained model

Configuration is a ``key = value`` text file (``#`` comments allowed);
command-line flags override config values.  Relative paths in the config
resolve against the config file's directory.  Every command is
deterministic given the config and seeds; exit codes are 0 on success,
1 on runtime failure, 2 on bad input or configuration.

Recognized config keys (paths unless noted): answers, allowed_guesses,
glove_embeddings, cdv_embeddings, pronunciations, frequencies,
letter_probabilities, phoneme_probabilities, affect_norms, humor_norms,
category_seeds, labels; seed, subsample_seed, split_seed, cv_seed,
mlp_seed (ints); folds, cdv_top_k, max_iter, kappa_threshold (ints);
l2, tol (floats); lambda_grid, split_fractions (comma lists);
candidate_universe = answers|guesses; solved_terminal_zero = true|false;
prob_feature_mode = mean_of_logs|log_of_means; cdv_search_vocab =
humor|embedding; u_phoneme (ARPAbet symbol); include_per_guess =
true|false.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import classify, engine, funny, gamefeatures, games as games_mod, lexres, model_io
from .errors import FitError, InputDataError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_INPUT = 2

_PATH_KEYS = (
    "answers", "allowed_guesses", "glove_embeddings", "cdv_embeddings",
    "pronunciations", "frequencies", "letter_probabilities",
    "phoneme_probabilities", "affect_norms", "humor_norms", "category_seeds",
    "labels",
)


@dataclass
class RunConfig:
    paths: dict[str, Path] = field(default_factory=dict)
    seed: int = 0
    subsample_seed: int | None = None
    split_seed: int | None = None
    cv_seed: int | None = None
    mlp_seed: int | None = None
    folds: int = 10
    cdv_top_k: int = 100
    l2: float = 0.0
    tol: float = 1e-8
    max_iter: int = 100
    kappa_threshold: int = 2
    lambda_grid: tuple[float, ...] = funny.DEFAULT_LAMBDA_GRID
    split_fractions: tuple[float, float, float] = (0.6, 0.2, 0.2)
    candidate_universe: str = "answers"
    solved_terminal_zero: bool = True
    prob_feature_mode: str = "mean_of_logs"
    cdv_search_vocab: str = "humor"
    u_phoneme: str = funny.DEFAULT_U_PHONEME
    include_per_guess: bool = False

    def path(self, key: str, required: bool = True) -> Path | None:
        p = self.paths.get(key)
        if p is None and required:
            raise InputDataError(f"{key.replace('_', ' ')}: no path configured "
                                 f"(set {key!r} in the config file)")
        return p

    def seed_for(self, role: str) -> int:
        value = getattr(self, f"{role}_seed")
        return self.seed if value is None else value


def _parse_bool(value: str, key: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise InputDataError(f"config key {key}: expected true/false, got {value!r}")


def _parse_floats(value: str, key: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in value.split(",") if tok.strip())
    except ValueError:
        raise InputDataError(f"config key {key}: expected comma-separated numbers")


def read_config_file(path) -> dict[str, str]:
    p = Path(path)
    if not p.is_file():
        raise InputDataError(f"config: file not found: {p}")
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputDataError(f"{p}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    return entries


def build_config(config_path: str | None, overrides: dict[str, str]) -> RunConfig:
    """Config file first, then flag overrides; paths resolve against the
    config file's directory (overrides resolve against the CWD)."""
    cfg = RunConfig()
    if config_path:
        base = Path(config_path).resolve().parent
        for key, value in read_config_file(config_path).items():
            _apply_entry(cfg, key, value, base)
    for key, value in overrides.items():
        if value is not None:
            _apply_entry(cfg, key, str(value), Path.cwd())
    return cfg


def _apply_entry(cfg: RunConfig, key: str, value: str, base: Path) -> None:
    if key in _PATH_KEYS:
        p = Path(value)
        cfg.paths[key] = p if p.is_absolute() else base / p
        return
    if key in ("seed", "subsample_seed", "split_seed", "cv_seed", "mlp_seed",
               "folds", "cdv_top_k", "max_iter", "kappa_threshold"):
        try:
            setattr(cfg, key, int(value))
        except ValueError:
            raise InputDataError(f"config key {key}: expected an integer, got {value!r}")
        return
    if key in ("l2", "tol"):
        try:
            setattr(cfg, key, float(value))
        except ValueError:
            raise InputDataError(f"config key {key}: expected a number, got {value!r}")
        return
    if key == "lambda_grid":
        cfg.lambda_grid = _parse_floats(value, key)
        return
    if key == "split_fractions":
        fracs = _parse_floats(value, key)
        if len(fracs) != 3:
            raise InputDataError("config key split_fractions: expected three numbers")
        cfg.split_fractions = fracs  # validated by split_indices
        return
    if key in ("solved_terminal_zero", "include_per_guess"):
        setattr(cfg, key, _parse_bool(value, key))
        return
    if key == "candidate_universe":
        if value not in ("answers", "guesses"):
            raise InputDataError(f"config key {key}: expected answers|guesses")
        cfg.candidate_universe = value
        return
    if key == "prob_feature_mode":
        if value not in ("mean_of_logs", "log_of_means"):
            raise InputDataError(f"config key {key}: expected mean_of_logs|log_of_means")
        cfg.prob_feature_mode = value
        return
    if key == "cdv_search_vocab":
        if value not in ("humor", "embedding"):
            raise InputDataError(f"config key {key}: expected humor|embedding")
        cfg.cdv_search_vocab = value
        return
    if key == "u_phoneme":
        cfg.u_phoneme = value.upper()
        return
    raise InputDataError(f"unknown config key {key!r}")


def _stage(label: str, fn, *args, **kwargs):
    """Run a loader, prefixing errors with the pipeline stage name."""
    try:
        return fn(*args, **kwargs)
    except (InputDataError, FileNotFoundError) as exc:
        raise InputDataError(f"{label}: {exc}") from exc


def _load_word_list(cfg: RunConfig) -> lexres.WordList:
    return _stage("word list", lexres.load_word_list,
                  cfg.path("answers"), cfg.paths.get("allowed_guesses"))


def _load_funniness_resources(cfg: RunConfig, cdvs=None) -> funny.FunninessResources:
    """Load the word-feature resources; CDVs are built from the config unless
    pre-built ones (from a model file) are passed in."""
    emb = _stage("cdv embeddings", lexres.load_embeddings, cfg.path("cdv_embeddings"))
    if cdvs is None:
        seeds = _stage("category seeds", funny.load_category_seeds,
                       cfg.paths.get("category_seeds"))
        if cfg.cdv_search_vocab == "humor":
            humor = _stage("humor norms", lexres.load_humor_norms, cfg.path("humor_norms"))
            search_vocab = humor.words()
        else:
            search_vocab = sorted(emb.words())
        cdvs = _stage("category vectors", funny.build_all_cdvs,
                      seeds, emb, search_vocab, cfg.cdv_top_k)
    return funny.FunninessResources(
        embeddings=emb,
        cdvs=cdvs,
        pronunciations=_stage("pronunciations", lexres.load_pronunciations,
                              cfg.path("pronunciations")),
        frequencies=_stage("frequencies", lexres.load_frequencies,
                           cfg.path("frequencies")),
        letter_probabilities=_stage("letter probabilities",
                                    lexres.load_symbol_probabilities,
                                    cfg.path("letter_probabilities"), "letter"),
        phoneme_probabilities=_stage("phoneme probabilities",
                                     lexres.load_symbol_probabilities,
                                     cfg.path("phoneme_probabilities"), "phoneme"),
        affect=_stage("affect norms", lexres.load_affect_norms,
                      cfg.path("affect_norms")),
        prob_mode=cfg.prob_feature_mode,
        u_phoneme=cfg.u_phoneme,
    )


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args) -> int:
    text = _stage("share text", Path(args.input).read_text, encoding="utf-8")
    rows, skipped = games_mod.parse_share_file(text, strict=args.strict)
    with open(args.output, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(games_mod.game_to_json(row) + "\n")
    print(f"parsed {len(rows)} games, skipped {len(skipped)} blocks "
          f"-> {args.output}")
    for skip in skipped[:10]:
        logger.info("skipped %s: %s", skip.game_id, skip.reason)
    return EXIT_OK


def cmd_funniness_train(args) -> int:
    cfg = build_config(args.config, {})
    res = _load_funniness_resources(cfg)
    humor = _stage("humor norms", lexres.load_humor_norms, cfg.path("humor_norms"))
    model = funny.fit_funniness(humor, res, lambda_grid=cfg.lambda_grid,
                                folds=cfg.folds, seed=cfg.seed_for("cv"))
    out = _out_dir(args)
    model_path = out / "funniness_model.json"
    model_io.save_funniness_model(model_path, model, cdvs=res.cdvs,
                                  prob_mode=res.prob_mode, u_phoneme=res.u_phoneme)

    report = model.cv_report
    with open(out / "funniness_cv_report.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        writer.writerow(["retained_words", report["retained"]])
        writer.writerow(["dropped_words", report["dropped"]])
        writer.writerow(["ridge_lambda", repr(model.ridge_lambda)])
        writer.writerow(["cv_rmse", repr(report["pooled_rmse"])])
        writer.writerow(["cv_r2", repr(report["pooled_r2"])])
        writer.writerow(["holdout_rmse", repr(report["holdout_rmse"])])
        writer.writerow(["holdout_r2", repr(report["holdout_r2"])])
        for fold, rmse in enumerate(report["fold_rmse"]):
            writer.writerow([f"fold{fold}_rmse", repr(rmse)])
        for lam, rmse in zip(report["lambda_grid"], report["rmse_by_lambda"]):
            writer.writerow([f"lambda_{lam:g}_rmse", repr(rmse)])

    plot_rows = funny.export_fit_plot_data(model, humor, res)
    with open(out / "funniness_fit.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "actual", "predicted"])
        for word, actual, predicted in plot_rows:
            writer.writerow([word, repr(actual), repr(predicted)])

    print(f"retained {report['retained']} words ({report['dropped']} dropped)")
    print(f"ridge lambda {model.ridge_lambda:g}  "
          f"CV RMSE {report['pooled_rmse']:.4f}  R2 {report['pooled_r2']:.4f}")
    print(f"holdout RMSE {report['holdout_rmse']:.4f}  R2 {report['holdout_r2']:.4f}")
    print(f"model -> {model_path}")
    return EXIT_OK


def _read_games(path, fmt: str, strict: bool):
    if fmt == "raw":
        text = _stage("share text", Path(path).read_text, encoding="utf-8")
        return games_mod.parse_share_file(text, strict=strict)
    return _stage("games", games_mod.load_games, path, strict=strict)


def cmd_features(args) -> int:
    cfg = build_config(args.config, {})
    rows, skipped = _read_games(args.games, args.games_format, args.strict)
    labels_path = args.labels or cfg.path("labels")
    labels = _stage("labels", games_mod.load_labels, labels_path)
    labeled, join_report = games_mod.join_labels(rows, labels)

    word_list = _load_word_list(cfg)
    universe = engine.EncodedUniverse(word_list.universe(cfg.candidate_universe))
    fun_model, cdvs, options = _stage("funniness model",
                                      model_io.load_funniness_model,
                                      args.funniness_model)
    cfg.prob_feature_mode = options.get("prob_mode", cfg.prob_feature_mode)
    cfg.u_phoneme = options.get("u_phoneme", cfg.u_phoneme)
    res = _load_funniness_resources(cfg, cdvs=cdvs)
    scorer = funny.FunninessScorer(fun_model, res)
    glove = _stage("glove embeddings", lexres.load_embeddings,
                   cfg.path("glove_embeddings"))

    include_pg = args.per_guess or cfg.include_per_guess
    feature_rows: list[gamefeatures.FeatureRow] = []
    no_words = 0
    inconsistent = 0
    ineligible = 0
    for lg in labeled:
        if lg.game.guesses is None:
            no_words += 1
            continue
        try:
            feats = gamefeatures.extract_game_features(
                lg.game, universe, glove, scorer,
                include_per_guess=include_pg,
                solved_terminal_zero=cfg.solved_terminal_zero)
        except InputDataError as exc:
            if args.strict:
                raise InputDataError(f"game {lg.game_id}: {exc}") from exc
            logger.warning("skipping game %s: %s", lg.game_id, exc)
            inconsistent += 1
            continue
        if not gamefeatures.training_eligible(feats):
            ineligible += 1
        feature_rows.append(gamefeatures.FeatureRow(
            game_id=lg.game_id, label=lg.label, features=feats))
    gamefeatures.write_features_csv(args.output, feature_rows, include_pg)

    print(f"games parsed: {len(rows)} (skipped {len(skipped)})")
    print(f"labeled: {len(labeled)} (unlabeled {join_report.unlabeled_games}, "
          f"orphan labels {join_report.orphan_labels})")
    print(f"excluded: {no_words} without typed guesses, "
          f"{inconsistent} inconsistent transcripts")
    print(f"rows written: {len(feature_rows)} "
          f"({ineligible} flagged training-ineligible) -> {args.output}")
    return EXIT_OK


def _prepare_training_data(table: gamefeatures.FeatureTable, cfg: RunConfig):
    """Eligibility filter -> balanced subsample -> split; returns index sets
    plus counts for the report."""
    eligible = table.eligible_mask()
    idx_all = np.flatnonzero(eligible)
    labels = table.labels[idx_all]
    sub = classify.balanced_subsample_indices(labels, cfg.seed_for("subsample"))
    idx_bal = idx_all[sub]
    tr, va, te = classify.split_indices(len(idx_bal), cfg.split_fractions,
                                        cfg.seed_for("split"))
    counts = {
        "rows_total": len(table.labels),
        "rows_ineligible": int(len(table.labels) - len(idx_all)),
        "rows_balanced": len(idx_bal),
        "n_train": len(tr), "n_val": len(va), "n_test": len(te),
    }
    return idx_bal[tr], idx_bal[va], idx_bal[te], counts


def _fit_on_split(table, cfg, feature_names, idx_tr):
    cols = [gamefeatures.GAME_FEATURE_NAMES.index(n) for n in feature_names]
    X = table.X[:, cols]
    normalizer = classify.zscore_fit(X[idx_tr], feature_names)
    model = classify.fit_logistic(
        classify.zscore_apply(normalizer, X[idx_tr]), table.labels[idx_tr],
        l2=cfg.l2, tol=cfg.tol, max_iter=cfg.max_iter,
        feature_names=feature_names)
    return X, normalizer, model


def _write_inference_csv(path, inference: classify.InferenceTable) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "estimate", "std_error", "z_value",
                         "p_value", "signif", "p_bonferroni"])
        for row in inference.rows:
            writer.writerow([row.name, repr(row.estimate), repr(row.std_error),
                             repr(row.z_value), repr(row.p_value), row.stars,
                             repr(row.p_bonferroni)])


def _print_inference(inference: classify.InferenceTable) -> None:
    print(f"{'feature':<38}{'estimate':>12}{'se':>11}{'z':>9}{'p':>12}")
    for row in inference.rows:
        print(f"{row.name:<38}{row.estimate:>12.6f}{row.std_error:>11.6f}"
              f"{row.z_value:>9.3f}{row.p_value:>12.4g} {row.stars}")
    print("signif. codes: 0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1")


def cmd_train(args) -> int:
    cfg = build_config(args.config, {})
    if args.l2 is not None:
        cfg.l2 = args.l2
    table = _stage("features", gamefeatures.read_features_csv, args.features)
    idx_tr, idx_va, idx_te, counts = _prepare_training_data(table, cfg)
    names = gamefeatures.GAME_FEATURE_NAMES
    X, normalizer, model = _fit_on_split(table, cfg, names, idx_tr)
    y = table.labels

    Xz = classify.zscore_apply(normalizer, X)
    evals = {
        "train": classify.evaluate(model, Xz[idx_tr], y[idx_tr]),
        "val": classify.evaluate(model, Xz[idx_va], y[idx_va]),
        "test": classify.evaluate(model, Xz[idx_te], y[idx_te]),
    }

    # inference always runs on the unregularized refit
    if cfg.l2 == 0.0:
        infer_model = model
    else:
        infer_model = classify.fit_logistic(Xz[idx_tr], y[idx_tr], l2=0.0,
                                            tol=cfg.tol, max_iter=cfg.max_iter,
                                            feature_names=names)
    inference = classify.coefficient_inference(infer_model, Xz[idx_tr], y[idx_tr])

    # how much of the game length the other features already explain
    length_idx = names.index("num_possible_guesses_length")
    other_cols = [j for j in range(len(names)) if j != length_idx]
    aux_r2 = classify.fit_aux_length_regression(
        X[idx_tr][:, other_cols], X[idx_tr][:, length_idx])

    seeds = {"subsample": cfg.seed_for("subsample"), "split": cfg.seed_for("split")}
    out = _out_dir(args)
    model_path = out / "amusement_model.json"
    model_io.save_amusement_model(model_path, model, normalizer, metadata={
        "counts": counts, "seeds": seeds,
        "split_fractions": list(cfg.split_fractions),
    })
    report = {
        "splits": {name: ev.as_dict() for name, ev in evals.items()},
        "counts": counts,
        "seeds": seeds,
        "l2": cfg.l2,
        "converged": model.converged,
        "diagnostics": model.diagnostics,
        "aux_length_r2": aux_r2,
    }

    if args.mlp:
        mlp_model, _ = classify.fit_mlp(
            Xz[idx_tr], y[idx_tr], architecture=args.mlp,
            seed=cfg.seed_for("mlp"), epochs=args.mlp_epochs, lr=args.mlp_lr,
            X_val=Xz[idx_va], y_val=y[idx_va])
        report["mlp"] = {
            "architecture": args.mlp,
            "val": classify.evaluate(mlp_model, Xz[idx_va], y[idx_va]).as_dict(),
            "test": classify.evaluate(mlp_model, Xz[idx_te], y[idx_te]).as_dict(),
        }

    (out / "eval_report.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    _write_inference_csv(out / "inference.csv", inference)

    print(f"rows: {counts['rows_total']} total, {counts['rows_ineligible']} "
          f"ineligible, {counts['rows_balanced']} after balancing")
    for name in ("train", "val", "test"):
        ev = evals[name]
        print(f"{name}: accuracy {ev.accuracy:.4f} (base rate {ev.base_rate:.4f}, "
              f"n={ev.n})")
    print(f"length predicted from the other features: R2 {aux_r2:.4f}")
    if not model.converged:
        print(f"warning: {model.diagnostics}")
    if args.mlp:
        print(f"mlp {args.mlp}: test accuracy {report['mlp']['test']['accuracy']:.4f}")
    _print_inference(inference)
    print(f"model -> {model_path}")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = build_config(args.config, {})
    table = _stage("features", gamefeatures.read_features_csv, args.features)
    full_names = tuple(args.full.split(",")) if args.full else gamefeatures.GAME_FEATURE_NAMES
    nested_names = (tuple(args.nested.split(","))
                    if args.nested else ("num_possible_guesses_length",))
    for name in (*full_names, *nested_names):
        if name not in gamefeatures.GAME_FEATURE_NAMES:
            raise InputDataError(f"unknown feature {name!r}")

    idx_tr, _, idx_te, _ = _prepare_training_data(table, cfg)
    cfg.l2 = 0.0  # the test is defined on unregularized fits
    X_full, norm_full, model_full = _fit_on_split(table, cfg, full_names, idx_tr)
    X_nested, norm_nested, model_nested = _fit_on_split(table, cfg, nested_names, idx_tr)
    y = table.labels
    result = classify.likelihood_ratio_test(
        model_full, model_nested,
        classify.zscore_apply(norm_full, X_full)[idx_tr],
        classify.zscore_apply(norm_nested, X_nested)[idx_tr],
        y[idx_tr])
    acc_full = classify.evaluate(
        model_full, classify.zscore_apply(norm_full, X_full)[idx_te], y[idx_te])
    acc_nested = classify.evaluate(
        model_nested, classify.zscore_apply(norm_nested, X_nested)[idx_te], y[idx_te])

    out = _out_dir(args)
    with open(out / "compare_report.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["statistic", "dof", "p_value",
                         "full_test_accuracy", "nested_test_accuracy",
                         "full_features", "nested_features"])
        writer.writerow([repr(result.statistic), result.dof, repr(result.p_value),
                         repr(acc_full.accuracy), repr(acc_nested.accuracy),
                         " ".join(full_names), " ".join(nested_names)])
    print(f"LRT statistic {result.statistic:.4f}  dof {result.dof}  "
          f"p {result.p_value:.4g}")
    print(f"test accuracy: full {acc_full.accuracy:.4f}  "
          f"nested {acc_nested.accuracy:.4f}")
    return EXIT_OK


def cmd_kappa(args) -> int:
    cfg = build_config(args.config, {})
    if args.threshold is not None:
        cfg.kappa_threshold = args.threshold
    table = _stage("annotations", games_mod.load_annotations, args.annotations)
    names, matrix = games_mod.kappa_matrix(table, cfg.kappa_threshold)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rater", *names])
        for i, name in enumerate(names):
            writer.writerow([name] + [repr(float(v)) for v in matrix[i]])
    width = max(len(n) for n in names) + 2
    print(" " * width + "".join(f"{n:>{width}}" for n in names))
    for i, name in enumerate(names):
        print(f"{name:<{width}}" + "".join(f"{matrix[i, j]:>{width}.4f}"
                                           for j in range(len(names))))
    print(f"matrix -> {args.output}")
    return EXIT_OK


def cmd_score(args) -> int:
    cfg = build_config(args.config, {})
    model, normalizer, _ = _stage("amusement model",
                                  model_io.load_amusement_model, args.model)
    fun_model, cdvs, options = _stage("funniness model",
                                      model_io.load_funniness_model,
                                      args.funniness_model)
    cfg.prob_feature_mode = options.get("prob_mode", cfg.prob_feature_mode)
    cfg.u_phoneme = options.get("u_phoneme", cfg.u_phoneme)
    res = _load_funniness_resources(cfg, cdvs=cdvs)
    scorer = funny.FunninessScorer(fun_model, res)
    glove = _stage("glove embeddings", lexres.load_embeddings,
                   cfg.path("glove_embeddings"))
    word_list = _load_word_list(cfg)
    universe = engine.EncodedUniverse(word_list.universe(cfg.candidate_universe))

    rows, _ = _read_games(args.games, args.games_format, strict=False)
    cols = [gamefeatures.GAME_FEATURE_NAMES.index(n) for n in model.feature_names]
    out_rows = []
    for row in rows:
        if row.game.guesses is None:
            print(f"{row.game_id}: skipped (no typed guesses)")
            continue
        feats = gamefeatures.extract_game_features(
            row.game, universe, glove, scorer,
            solved_terminal_zero=cfg.solved_terminal_zero)
        z = classify.zscore_apply(normalizer, feats.values[cols][np.newaxis, :])[0]
        prob = float(model.predict_proba(z[np.newaxis, :])[0])
        contribs = {name: float(c * v) for name, c, v in
                    zip(model.feature_names, model.coef, z)}
        top = sorted(contribs.items(), key=lambda kv: -abs(kv[1]))[:3]
        top_text = ", ".join(f"{n} {v:+.3f}" for n, v in top)
        print(f"{row.game_id}: p(amused) = {prob:.4f}  [{top_text}]")
        out_rows.append((row.game_id, prob, contribs))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["game_id", "probability",
                             *model.feature_names])
            for gid, prob, contribs in out_rows:
                writer.writerow([gid, repr(prob)] +
                                [repr(contribs[n]) for n in model.feature_names])
        print(f"scores -> {args.output}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wordle-amuse",
        description="replay Wordle games, extract features, model amusement")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="raw share text -> games JSONL")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("funniness-train", help="fit the word-funniness model")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_funniness_train)

    p = sub.add_parser("features", help="extract per-game features")
    p.add_argument("--config", required=True)
    p.add_argument("--games", required=True)
    p.add_argument("--games-format", choices=("jsonl", "raw"), default="jsonl")
    p.add_argument("--labels", default=None)
    p.add_argument("--funniness-model", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--per-guess", action="store_true")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="train and evaluate the classifier")
    p.add_argument("--config", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--l2", type=float, default=None)
    p.add_argument("--mlp", default=None, metavar="ARCH",
                   help="also fit a feedforward baseline, e.g. NFEAT-10-10-1")
    p.add_argument("--mlp-epochs", type=int, default=200)
    p.add_argument("--mlp-lr", type=float, default=1e-3)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("compare", help="likelihood-ratio test of nested models")
    p.add_argument("--config", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--full", default=None, help="comma-separated feature names")
    p.add_argument("--nested", default=None,
                   help="comma-separated feature names (default: length only)")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("kappa", help="pairwise rater agreement matrix")
    p.add_argument("--annotations", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--threshold", type=int, default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("score", help="score games with a trained model")
    p.add_argument("--config", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--funniness-model", required=True)
    p.add_argument("--games", required=True)
    p.add_argument("--games-format", choices=("jsonl", "raw"), default="jsonl")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_score)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # runtime failure of any other kind
        logger.exception("unhandled failure")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
