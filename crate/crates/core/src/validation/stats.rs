use std::fmt;

use serde::{Deserialize, Serialize};

use crate::generation::{Dataset, Sequent};
use crate::logic::{metrics, Formula, Op};
use crate::semantics::count_sat;
use crate::validation::{chi_squared, critical_value, Histogram};

/// Aggregate shape of a split. Means are `None` for an empty dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitStats {
    pub size: usize,
    /// Distinct variables per sequent, over both sides.
    pub mean_vars: Option<f64>,
    /// Operators per formula.
    pub mean_ops: Option<f64>,
    /// Nodes per formula.
    pub mean_length: Option<f64>,
    /// `2^#vars` per sequent: the number of assignments to check.
    pub mean_worlds: Option<f64>,
}

pub fn split_stats(d: &Dataset) -> SplitStats {
    let n = d.len();
    if n == 0 {
        return SplitStats {
            size: 0,
            mean_vars: None,
            mean_ops: None,
            mean_length: None,
            mean_worlds: None,
        };
    }
    let (mut vars, mut ops, mut length, mut worlds) = (0.0, 0.0, 0.0, 0.0);
    for s in &d.sequents {
        let (ma, mb) = (metrics(&s.premise), metrics(&s.conclusion));
        let v = ma.vars.union(mb.vars).len();
        vars += v as f64;
        worlds += 2f64.powi(v as i32);
        ops += (ma.op_total + mb.op_total) as f64;
        length += (ma.length + mb.length) as f64;
    }
    let n = n as f64;
    SplitStats {
        size: d.len(),
        mean_vars: Some(vars / n),
        mean_ops: Some(ops / (2.0 * n)),
        mean_length: Some(length / (2.0 * n)),
        mean_worlds: Some(worlds / n),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// An integer statistic of one formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    Length,
    Num(Op),
    NumAt(Op, usize),
    /// Satisfying assignments over the formula's own variables.
    Sat,
}

impl Statistic {
    pub const LEVELS: usize = 3;

    /// Length, `num` per operator, `num_at` per operator for levels 0–2, #sat.
    pub fn all() -> Vec<Statistic> {
        let mut out = vec![Statistic::Length];
        out.extend(Op::ALL.iter().map(|&op| Statistic::Num(op)));
        for level in 0..Self::LEVELS {
            out.extend(Op::ALL.iter().map(|&op| Statistic::NumAt(op, level)));
        }
        out.push(Statistic::Sat);
        out
    }

    /// `None` when #sat is requested for a formula beyond the enumeration limit.
    pub fn measure(&self, f: &Formula) -> Option<u64> {
        match *self {
            Statistic::Sat => count_sat(f).ok(),
            Statistic::Length => Some(metrics(f).length as u64),
            Statistic::Num(op) => Some(metrics(f).num(op) as u64),
            Statistic::NumAt(op, level) => Some(metrics(f).num_at(op, level) as u64),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Length => write!(f, "length"),
            Statistic::Num(op) => write!(f, "num({})", op.symbol()),
            Statistic::NumAt(op, level) => write!(f, "num_at({},{level})", op.symbol()),
            Statistic::Sat => write!(f, "#sat"),
        }
    }
}

/// One statistic compared between positives and negatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    /// Display name, e.g. `num_at(&,0)` or `new-vars`.
    pub statistic: String,
    /// `None` for sequent-level statistics.
    pub side: Option<Side>,
    pub mean_pos: Option<f64>,
    pub mean_neg: Option<f64>,
    /// `None` when a class has no measurements.
    pub chi2: Option<f64>,
    pub df: usize,
    pub critical: f64,
    pub violation: bool,
    /// Formulas skipped because #sat could not be enumerated.
    pub excluded: usize,
}

impl StatRow {
    pub fn label(&self) -> String {
        match self.side {
            Some(side) => format!("{}[{side}]", self.statistic),
            None => self.statistic.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub alpha: f64,
    pub positives: usize,
    pub negatives: usize,
    pub rows: Vec<StatRow>,
}

impl StatReport {
    pub fn row(&self, statistic: &str, side: Option<Side>) -> Option<&StatRow> {
        self.rows
            .iter()
            .find(|r| r.statistic == statistic && r.side == side)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<18} {:>10} {:>10} {:>12} {:>5} {:>10}  flag\n",
            "statistic", "mean D+", "mean D-", "chi2", "df", "critical"
        );
        let num = |x: Option<f64>| x.map_or("-".to_string(), |x| format!("{x:.4}"));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<18} {:>10} {:>10} {:>12} {:>5} {:>10.3}  {}\n",
                r.label(),
                num(r.mean_pos),
                num(r.mean_neg),
                num(r.chi2),
                r.df,
                r.critical,
                if r.violation { "VIOLATION" } else { "ok" }
            ));
        }
        out
    }
}

fn compare(
    name: String,
    side: Option<Side>,
    pos: &Histogram,
    neg: &Histogram,
    excluded: usize,
    alpha: f64,
) -> StatRow {
    let test = chi_squared(pos, neg).ok();
    let df = test.map_or(0, |t| t.df);
    StatRow {
        statistic: name,
        side,
        mean_pos: pos.mean(),
        mean_neg: neg.mean(),
        chi2: test.map(|t| t.statistic),
        df,
        critical: critical_value(df, alpha),
        violation: test.is_some_and(|t| t.rejects(alpha)),
        excluded,
    }
}

/// `|vars(B) − vars(A)|`: conclusion variables absent from the premise.
pub fn new_variables(s: &Sequent) -> u64 {
    s.conclusion.vars().difference(s.premise.vars()).len() as u64
}

/// Per-side, per-class comparison of every formula statistic, plus the
/// new-variable count, each with a χ² homogeneity test at `alpha`.
pub fn class_stats_at(d: &Dataset, alpha: f64) -> StatReport {
    let stats = Statistic::all();
    let mut rows = Vec::new();
    for side in [Side::A, Side::B] {
        let mut hists = vec![(Histogram::new(), Histogram::new()); stats.len()];
        let mut excluded = vec![0usize; stats.len()];
        for s in &d.sequents {
            let f = match side {
                Side::A => &s.premise,
                Side::B => &s.conclusion,
            };
            let m = metrics(f);
            for (i, stat) in stats.iter().enumerate() {
                let value = match *stat {
                    Statistic::Length => Some(m.length as u64),
                    Statistic::Num(op) => Some(m.num(op) as u64),
                    Statistic::NumAt(op, level) => Some(m.num_at(op, level) as u64),
                    Statistic::Sat => count_sat(f).ok(),
                };
                match value {
                    Some(v) if s.label => hists[i].0.add(v),
                    Some(v) => hists[i].1.add(v),
                    None => excluded[i] += 1,
                }
            }
        }
        for (i, stat) in stats.iter().enumerate() {
            rows.push(compare(
                stat.to_string(),
                Some(side),
                &hists[i].0,
                &hists[i].1,
                excluded[i],
                alpha,
            ));
        }
    }
    let pos = Histogram::from_values(d.positives().map(new_variables));
    let neg = Histogram::from_values(d.negatives().map(new_variables));
    rows.push(compare("new-vars".into(), None, &pos, &neg, 0, alpha));
    StatReport {
        alpha,
        positives: d.positives().count(),
        negatives: d.negatives().count(),
        rows,
    }
}

pub const DEFAULT_ALPHA: f64 = 0.01;

pub fn class_stats(d: &Dataset) -> StatReport {
    class_stats_at(d, DEFAULT_ALPHA)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;

    fn seq(a: &str, b: &str) -> Sequent {
        Sequent::decide(parse(a).unwrap(), parse(b).unwrap())
    }

    #[test]
    fn split_stats_by_hand() {
        let d = Dataset::new(vec![seq("p&q", "q"), seq("q|r", "r")]);
        let s = split_stats(&d);
        assert_eq!(s.size, 2);
        assert_eq!(s.mean_vars, Some(2.0));
        assert_eq!(s.mean_ops, Some(0.5));
        assert_eq!(s.mean_length, Some(2.0));
        assert_eq!(s.mean_worlds, Some(4.0));
        assert_eq!(split_stats(&Dataset::default()).mean_ops, None);
    }

    #[test]
    fn statistic_names() {
        let names: Vec<String> = Statistic::all().iter().map(|s| s.to_string()).collect();
        assert_eq!(names.len(), 1 + 4 + 12 + 1);
        assert_eq!(names[0], "length");
        assert!(names.contains(&"num_at(&,0)".to_string()));
        assert_eq!(Statistic::Sat.measure(&parse("p|q").unwrap()), Some(3));
    }

    #[test]
    fn class_means() {
        let d = Dataset::new(vec![
            seq("p&q", "q"),
            seq("p&q", "p&r"),
            seq("p", "p|q"),
            seq("q|r", "r"),
        ]);
        let r = class_stats(&d);
        assert_eq!((r.positives, r.negatives), (2, 2));
        let and0 = r.row("num_at(&,0)", Some(Side::A)).unwrap();
        assert_eq!(and0.mean_pos, Some(0.5));
        assert_eq!(and0.mean_neg, Some(0.5));
        assert_eq!(and0.chi2, Some(0.0));
        let nv = r.row("new-vars", None).unwrap();
        assert_eq!(nv.mean_pos, Some(0.5));
        assert_eq!(nv.mean_neg, Some(0.5));
        let sat = r.row("#sat", Some(Side::B)).unwrap();
        assert_eq!(sat.mean_pos, Some(2.0));
        assert_eq!(sat.mean_neg, Some(1.0));
    }

    #[test]
    fn sat_exclusions_counted() {
        let wide = (b'a'..=b'u')
            .map(|c| (c as char).to_string())
            .collect::<Vec<_>>()
            .join("&");
        let d = Dataset::new(vec![seq(&wide, "a"), seq("a", "b")]);
        let r = class_stats(&d);
        assert_eq!(r.row("#sat", Some(Side::A)).unwrap().excluded, 1);
        assert_eq!(r.row("#sat", Some(Side::A)).unwrap().chi2, None);
    }
}
