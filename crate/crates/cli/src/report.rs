//! Fixed-width per-leaf boxplot table.

use std::fmt::Write as _;

use quist_core::{ClusteringResult, DoneReason};

const NUMERIC: [&str; 7] = ["min", "q1", "q2", "q3", "max", "sigma", "psi"];

fn num(v: f64) -> String {
    format!("{v:.6}")
}

/// One row per leaf in sorted-value order.
pub fn emit_report(result: &ClusteringResult) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:>6} {:>8}", "id", "size");
    for h in NUMERIC {
        let _ = write!(out, " {h:>16}");
    }
    let _ = writeln!(out, "  done_reason");

    for leaf in result.leaves() {
        let members = result.members(leaf);
        let s = leaf.stats;
        let _ = write!(out, "{:>6} {:>8}", leaf.id, leaf.size());
        for v in [
            members[0],
            s.q1,
            s.q2,
            s.q3,
            members[members.len() - 1],
            s.sigma,
            s.psi,
        ] {
            let _ = write!(out, " {:>16}", num(v));
        }
        let reason = leaf.done_reason.map_or("none", DoneReason::as_str);
        let _ = writeln!(out, "  {reason}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use quist_core::{build_dataset, run_quist, Instance, RawConfig};

    fn run(values: &[f64]) -> ClusteringResult {
        let inst: Vec<_> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| Instance::new(i, v))
            .collect();
        let ds = build_dataset(&inst).unwrap();
        run_quist(&ds, &RawConfig::default().validate(ds.len()).unwrap())
    }

    #[test]
    fn outlier_report() {
        let report = emit_report(&run(&[0.0, 0.0, 0.0, 100.0]));
        let lines: Vec<&str> = report.lines().collect();
        assert_eq!(lines.len(), 3);
        let first: Vec<&str> = lines[1].split_whitespace().collect();
        assert_eq!(first[1], "3");
        assert_eq!(&first[3..6], &["0.000000", "0.000000", "0.000000"]);
        assert_eq!(first[9], "low_spreadness");
        assert!(lines[2].split_whitespace().nth(2) == Some("100.000000"));
        assert_eq!(lines[1].len(), lines[2].len());
    }

    #[test]
    fn single_and_indivisible() {
        let report = emit_report(&run(&[0.0, 10.0, 10.0, 10.0]));
        assert_eq!(report.lines().count(), 2);
        assert!(report.lines().nth(1).unwrap().ends_with("indivisible"));
    }
}
