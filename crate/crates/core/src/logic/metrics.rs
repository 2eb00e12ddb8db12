use crate::logic::{Formula, Op, VarSet};

/// Syntactic counters used by the dataset requirements.
///
/// Levels count from the root at level 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaMetrics {
    /// Number of AST nodes (operators plus variable leaves).
    pub length: usize,
    pub num_ops: [usize; 4],
    /// `num_at[level][op]`.
    pub num_at: Vec<[usize; 4]>,
    pub vars: VarSet,
    pub op_total: usize,
    pub leaves: usize,
}

impl FormulaMetrics {
    pub fn num(&self, op: Op) -> usize {
        self.num_ops[op.index()]
    }

    pub fn num_at(&self, op: Op, level: usize) -> usize {
        self.num_at.get(level).map_or(0, |row| row[op.index()])
    }
}

pub fn metrics(f: &Formula) -> FormulaMetrics {
    let mut m = FormulaMetrics {
        length: 0,
        num_ops: [0; 4],
        num_at: Vec::new(),
        vars: VarSet::EMPTY,
        op_total: 0,
        leaves: 0,
    };
    walk(f, 0, &mut m);
    m
}

fn walk(f: &Formula, level: usize, m: &mut FormulaMetrics) {
    m.length += 1;
    match f.op() {
        None => {
            m.leaves += 1;
            if let Formula::Var(v) = f {
                m.vars.insert(*v);
            }
        }
        Some(op) => {
            m.op_total += 1;
            m.num_ops[op.index()] += 1;
            if m.num_at.len() <= level {
                m.num_at.resize(level + 1, [0; 4]);
            }
            m.num_at[level][op.index()] += 1;
        }
    }
    match f {
        Formula::Var(_) => {}
        Formula::Not(c) => walk(c, level + 1, m),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            walk(l, level + 1, m);
            walk(r, level + 1, m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;

    #[test]
    fn negation_count() {
        let m = metrics(&parse("~(p&~q)").unwrap());
        assert_eq!(m.num(Op::Not), 2);
        assert_eq!(m.num(Op::And), 1);
        assert_eq!(m.length, 5);
    }

    #[test]
    fn conjunction_shape() {
        let m = metrics(&parse("p&q").unwrap());
        assert_eq!(m.length, 3);
        assert_eq!(m.num_at(Op::And, 0), 1);
        assert_eq!(m.vars.len(), 2);
        assert_eq!(m.leaves, 2);
    }

    #[test]
    fn levels() {
        let m = metrics(&parse("~p|q").unwrap());
        assert_eq!(m.num_at(Op::Or, 0), 1);
        assert_eq!(m.num_at(Op::Not, 1), 1);
        assert_eq!(m.num_at(Op::Or, 1), 0);
        assert_eq!(m.num_at(Op::Or, 7), 0);
    }
}
