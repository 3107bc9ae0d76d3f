use std::fs::File;
use std::io::{Cursor, Read, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use bitarm::dataset::{
    parse_similarity_matrix, DiscretizeConfig, ScanCountingReader, SimilarityMatrix,
};
use bitarm::measures::{
    entropy, measure_vector, variance, ContingencyCounts, DiversityInput, Measure,
};
use bitarm::miner::{mine, mine_with_stats, to_absolute_support, FrequentItemsets, MiningConfig};
use bitarm::oracle::{apriori_mine_with_stats, TransactionSet};
use bitarm::rules::{early_exit_skipped, generate_rules, rank_by_confidence, RuleGenConfig};
use bitarm::synth::synth_similarity_matrix;

use crate::args::{BenchmarkArgs, DiscretizeArg, FormatArg, MeasuresArgs, MineArgs, SynthArgs};
use crate::error::CliError;
use crate::report::{BenchmarkReport, Diversity, RuleReport, RuleRow};

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(content.as_bytes()))
            .map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn discretize_config(arg: DiscretizeArg) -> Result<DiscretizeConfig<f64>, CliError> {
    Ok(match arg {
        DiscretizeArg::MaxMinusX(x) => DiscretizeConfig::max_minus_x(x)?,
        DiscretizeArg::Beta(b) => DiscretizeConfig::beta(b)?,
    })
}

/// Resolve a measure selection string ("all" or a comma list of acronyms).
fn parse_measures(selection: &str) -> Result<Vec<Measure>, CliError> {
    if selection.eq_ignore_ascii_case("all") {
        return Ok(Measure::ALL.to_vec());
    }
    let mut out = Vec::new();
    for name in selection.split(',') {
        let m: Measure = name
            .trim()
            .parse()
            .map_err(|e: String| CliError::Config(e))?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(CliError::Config("empty measure selection".to_string()));
    }
    Ok(out)
}

/// Support and confidence always have their own columns, so they are not
/// repeated among the measure columns.
fn measure_columns(selected: &[Measure]) -> Vec<Measure> {
    selected
        .iter()
        .copied()
        .filter(|m| !matches!(m, Measure::Sup | Measure::Conf))
        .collect()
}

fn ids_of(items: &[usize], ids: &[String]) -> Vec<String> {
    items.iter().map(|&i| ids[i].clone()).collect()
}

fn diversity_of(supports: Vec<f64>, mode: bitarm::measures::EntropyMode) -> Diversity {
    let Ok(d) = DiversityInput::new(supports) else {
        return Diversity::default();
    };
    Diversity {
        entropy: entropy(&d, mode).ok(),
        variance: variance(&d).ok(),
    }
}

pub fn cmd_mine(args: &MineArgs) -> Result<(), CliError> {
    let selected = parse_measures(&args.measures)?;
    let columns = measure_columns(&selected);
    let discretize = discretize_config(args.discretize)?;
    let mining = MiningConfig::new(args.min_support)?.with_exhaustive_candidates(args.strict_paper);
    let rule_cfg = RuleGenConfig::new(args.min_confidence)?.with_top_n(args.top)?;

    let text = read_file(&args.input)?;
    let matrix: SimilarityMatrix<f64> = parse_similarity_matrix(&text)?;
    let bits = discretize.apply(&matrix);
    let catalog = mine(&bits, &mining)?;
    let all_rules = generate_rules(&catalog, &rule_cfg);

    if args.paper_early_exit {
        for rule in early_exit_skipped(&catalog, &rule_cfg) {
            eprintln!(
                "early-exit heuristic would skip: {} -> {} (confidence {})",
                ids_of(rule.antecedent(), catalog.item_ids()).join(","),
                ids_of(rule.consequent(), catalog.item_ids()).join(","),
                crate::report::fmt_float(rule.confidence()),
            );
        }
    }

    let ranked = rank_by_confidence(all_rules, rule_cfg.top_n());
    let rows = ranked
        .iter()
        .map(|rule| {
            let v = measure_vector::<f64>(rule.counts())
                .map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(RuleRow {
                antecedent: ids_of(rule.antecedent(), catalog.item_ids()),
                consequent: ids_of(rule.consequent(), catalog.item_ids()),
                support: rule.support(),
                confidence: rule.confidence(),
                measures: columns.iter().map(|&m| v.get(m)).collect(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let diversity = diversity_of(
        ranked.iter().map(|r| r.support()).collect(),
        args.entropy_mode.into(),
    );

    let report = RuleReport {
        command: "mine",
        config: vec![
            ("input", args.input.display().to_string()),
            ("discretize", args.discretize.to_string()),
            ("min_support", args.min_support.to_string()),
            ("min_confidence", args.min_confidence.to_string()),
            ("top", args.top.to_string()),
            ("measures", join_measures(&selected)),
            ("entropy_mode", args.entropy_mode.as_str().to_string()),
            ("strict_paper", args.strict_paper.to_string()),
        ],
        measure_columns: columns,
        rows,
        diversity,
    };
    write_output(
        args.output.as_deref(),
        &report.render(args.format == FormatArg::Json),
    )
}

fn join_measures(selected: &[Measure]) -> String {
    selected
        .iter()
        .map(|m| m.as_str())
        .collect::<Vec<_>>()
        .join(",")
}

fn duration_ms(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e3)
}

pub fn cmd_benchmark(args: &BenchmarkArgs) -> Result<(), CliError> {
    if args.reps == 0 {
        return Err(CliError::Config("reps must be at least 1".to_string()));
    }
    let discretize = discretize_config(args.discretize)?;
    let mining = MiningConfig::new(args.min_support)?.with_exhaustive_candidates(args.strict_paper);

    // Materialize the corpus as CSV and parse it through a counting reader,
    // so the single-scan claim is measured rather than assumed.
    let (corpus_label, csv_text) = match &args.input {
        Some(path) => (path.display().to_string(), read_file(path)?),
        None => {
            let m: SimilarityMatrix<f64> =
                synth_similarity_matrix(args.seed, args.rows, args.items, args.density)?;
            (
                format!(
                    "synthetic seed={} rows={} items={} density={}",
                    args.seed, args.rows, args.items, args.density
                ),
                m.to_csv(),
            )
        }
    };
    let mut reader = ScanCountingReader::new(Cursor::new(csv_text.as_bytes()));
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|source| CliError::Io {
            path: corpus_label.clone(),
            source,
        })?;
    let matrix: SimilarityMatrix<f64> = parse_similarity_matrix(&text)?;
    let bits = discretize.apply(&matrix);
    let transactions = TransactionSet::from_bitmatrix(&bits);
    let new_support = to_absolute_support(args.min_support, bits.n_rows());

    let miner_scans = reader.full_passes();
    if miner_scans != 1 {
        return Err(CliError::Internal(format!(
            "miner observed {miner_scans} passes over the corpus, expected 1"
        )));
    }

    let mut miner_best: Option<Duration> = None;
    let mut apriori_best: Option<Duration> = None;
    let mut outputs: Option<(FrequentItemsets, _, _)> = None;
    for _ in 0..args.reps {
        let start = Instant::now();
        let (mined, mine_stats) = mine_with_stats(&bits, &mining)?;
        let miner_time = start.elapsed();

        let start = Instant::now();
        let (reference, apriori_stats) = apriori_mine_with_stats(&transactions, new_support);
        let apriori_time = start.elapsed();

        if mined != reference {
            return Err(CliError::Internal(
                "miner and Apriori outputs differ".to_string(),
            ));
        }
        miner_best = Some(miner_best.map_or(miner_time, |b| b.min(miner_time)));
        apriori_best = Some(apriori_best.map_or(apriori_time, |b| b.min(apriori_time)));
        outputs = Some((mined, mine_stats, apriori_stats));
    }
    let (mined, mine_stats, apriori_stats) = outputs.expect("reps >= 1");
    let miner_best = miner_best.expect("reps >= 1");
    let apriori_best = apriori_best.expect("reps >= 1");

    let report = BenchmarkReport {
        config: vec![
            ("corpus", corpus_label),
            ("discretize", args.discretize.to_string()),
            ("min_support", args.min_support.to_string()),
            ("new_support", new_support.to_string()),
            ("reps", args.reps.to_string()),
            ("strict_paper", args.strict_paper.to_string()),
        ],
        metrics: vec![
            (
                "wall_clock_ms",
                duration_ms(miner_best),
                duration_ms(apriori_best),
            ),
            (
                "peak_itemsets_in_memory",
                mine_stats.peak_stored().to_string(),
                apriori_stats.peak_candidates.to_string(),
            ),
            (
                "candidates_tested",
                mine_stats
                    .candidates_per_level
                    .iter()
                    .sum::<usize>()
                    .to_string(),
                apriori_stats.total_candidates.to_string(),
            ),
            (
                "data_scans",
                miner_scans.to_string(),
                apriori_stats.data_scans.to_string(),
            ),
            (
                "frequent_itemsets",
                mined.len().to_string(),
                mined.len().to_string(),
            ),
            ("outputs_equal", "true".to_string(), "true".to_string()),
        ],
    };
    write_output(
        args.output.as_deref(),
        &report.render(args.format == FormatArg::Json),
    )
}

pub fn cmd_synth(args: &SynthArgs) -> Result<(), CliError> {
    let m: SimilarityMatrix<f64> =
        synth_similarity_matrix(args.seed, args.rows, args.items, args.density)?;
    write_output(args.output.as_deref(), &m.to_csv())
}

pub fn cmd_measures(args: &MeasuresArgs) -> Result<(), CliError> {
    let selected = parse_measures(&args.measures)?;
    let columns = measure_columns(&selected);
    let text = read_file(&args.input)?;
    let parsed = parse_rule_csv(&text)?;

    let mut rows = Vec::new();
    let mut supports = Vec::new();
    for (antecedent, consequent, counts) in parsed {
        let v = measure_vector::<f64>(&counts).map_err(|e| CliError::Data(e.to_string()))?;
        supports.push(v.sup);
        rows.push(RuleRow {
            antecedent: vec![antecedent],
            consequent: vec![consequent],
            support: v.sup,
            confidence: v.conf,
            measures: columns.iter().map(|&m| v.get(m)).collect(),
        });
    }
    let diversity = diversity_of(supports, args.entropy_mode.into());

    let report = RuleReport {
        command: "measures",
        config: vec![
            ("input", args.input.display().to_string()),
            ("measures", join_measures(&selected)),
            ("entropy_mode", args.entropy_mode.as_str().to_string()),
        ],
        measure_columns: columns,
        rows,
        diversity,
    };
    write_output(
        args.output.as_deref(),
        &report.render(args.format == FormatArg::Json),
    )
}

const RULE_CSV_HEADER: &str = "antecedent,consequent,n,n_a,n_b,n_ab";

/// Rule CSV: one rule per line with its contingency counts. Labels are
/// opaque strings without commas or quotes.
fn parse_rule_csv(text: &str) -> Result<Vec<(String, String, ContingencyCounts)>, CliError> {
    let mut lines = text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::Data("empty rule CSV".to_string()))?;
    if header != RULE_CSV_HEADER {
        return Err(CliError::Data(format!(
            "rule CSV header must be {RULE_CSV_HEADER:?}, got {header:?}"
        )));
    }
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.contains('"') {
            return Err(CliError::Data(format!(
                "rule {idx}: quoted fields are not supported"
            )));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(CliError::Data(format!(
                "rule {idx}: expected 6 fields, found {}",
                fields.len()
            )));
        }
        let parse_count = |name: &str, s: &str| -> Result<usize, CliError> {
            s.parse().map_err(|_| {
                CliError::Data(format!("rule {idx}: cannot parse {name}={s:?} as a count"))
            })
        };
        let n = parse_count("n", fields[2])?;
        let n_a = parse_count("n_a", fields[3])?;
        let n_b = parse_count("n_b", fields[4])?;
        let n_ab = parse_count("n_ab", fields[5])?;
        let counts = ContingencyCounts::new(n, n_a, n_b, n_ab)
            .map_err(|e| CliError::Data(format!("rule {idx}: {e}")))?;
        out.push((fields[0].to_string(), fields[1].to_string(), counts));
    }
    Ok(out)
}
