//! Report assembly and rendering. TSV and JSON carry the same information:
//! a config echo, the table, and the diversity footer. Non-finite measure
//! values render as the strings "inf" / "-inf" in both formats; absent
//! diversity values render as "n/a" in TSV and null in JSON.

use bitarm::measures::Measure;
use serde_json::{json, Value};

pub fn fmt_float(v: f64) -> String {
    format!("{v}") // Display prints "inf" / "-inf" for infinities
}

pub fn json_float(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(fmt_float(v))
    }
}

#[derive(Debug, Clone)]
pub struct RuleRow {
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    pub support: f64,
    pub confidence: f64,
    pub measures: Vec<f64>, // aligned with the report's measure columns
}

#[derive(Debug, Clone, Default)]
pub struct Diversity {
    pub entropy: Option<f64>,
    pub variance: Option<f64>,
}

/// Ranked rule table with a config echo and diversity footer; used by the
/// mine and measures commands.
#[derive(Debug, Clone)]
pub struct RuleReport {
    pub command: &'static str,
    pub config: Vec<(&'static str, String)>,
    pub measure_columns: Vec<Measure>,
    pub rows: Vec<RuleRow>,
    pub diversity: Diversity,
}

impl RuleReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# command\t{}\n", self.command));
        for (key, value) in &self.config {
            out.push_str(&format!("# {key}\t{value}\n"));
        }
        out.push_str("antecedent\tconsequent\tsupport\tconfidence");
        for m in &self.measure_columns {
            out.push_str(&format!("\t{m}"));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}",
                row.antecedent.join(","),
                row.consequent.join(","),
                fmt_float(row.support),
                fmt_float(row.confidence)
            ));
            for v in &row.measures {
                out.push_str(&format!("\t{}", fmt_float(*v)));
            }
            out.push('\n');
        }
        out.push_str(&format!("# rules\t{}\n", self.rows.len()));
        out.push_str(&format!("# entropy\t{}\n", opt_tsv(self.diversity.entropy)));
        out.push_str(&format!("# variance\t{}\n", opt_tsv(self.diversity.variance)));
        out
    }

    pub fn to_json(&self) -> Value {
        let config: Value = self
            .config
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect::<serde_json::Map<String, Value>>()
            .into();
        let rules: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let measures: Value = self
                    .measure_columns
                    .iter()
                    .zip(&row.measures)
                    .map(|(m, v)| (m.to_string(), json_float(*v)))
                    .collect::<serde_json::Map<String, Value>>()
                    .into();
                json!({
                    "antecedent": row.antecedent,
                    "consequent": row.consequent,
                    "support": json_float(row.support),
                    "confidence": json_float(row.confidence),
                    "measures": measures,
                })
            })
            .collect();
        json!({
            "command": self.command,
            "config": config,
            "rules": rules,
            "rule_count": self.rows.len(),
            "diversity": {
                "entropy": opt_json(self.diversity.entropy),
                "variance": opt_json(self.diversity.variance),
            },
        })
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report is valid JSON");
            s.push('\n');
            s
        } else {
            self.to_tsv()
        }
    }
}

fn opt_tsv(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), fmt_float)
}

fn opt_json(v: Option<f64>) -> Value {
    v.map_or(Value::Null, json_float)
}

/// Side-by-side miner/baseline metrics from the benchmark command.
#[derive(Debug, Clone)]
pub struct BenchmarkReport {
    pub config: Vec<(&'static str, String)>,
    pub metrics: Vec<(&'static str, String, String)>, // name, miner, apriori
}

impl BenchmarkReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# command\tbenchmark\n");
        for (key, value) in &self.config {
            out.push_str(&format!("# {key}\t{value}\n"));
        }
        out.push_str("metric\tminer\tapriori\n");
        for (name, miner, apriori) in &self.metrics {
            out.push_str(&format!("{name}\t{miner}\t{apriori}\n"));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let config: Value = self
            .config
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect::<serde_json::Map<String, Value>>()
            .into();
        let metrics: Value = self
            .metrics
            .iter()
            .map(|(name, miner, apriori)| {
                (
                    name.to_string(),
                    json!({ "miner": miner, "apriori": apriori }),
                )
            })
            .collect::<serde_json::Map<String, Value>>()
            .into();
        json!({ "command": "benchmark", "config": config, "metrics": metrics })
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report is valid JSON");
            s.push('\n');
            s
        } else {
            self.to_tsv()
        }
    }
}
