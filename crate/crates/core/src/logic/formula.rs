use std::fmt;

/// Number of propositional variables available (`a` to `z`).
pub const ALPHABET: usize = 26;

/// A propositional variable, one of the 26 lowercase letters.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u8);

impl Var {
    pub fn new(index: usize) -> Option<Var> {
        (index < ALPHABET).then_some(Var(index as u8))
    }

    pub fn from_char(c: char) -> Option<Var> {
        c.is_ascii_lowercase().then(|| Var(c as u8 - b'a'))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn as_char(self) -> char {
        (b'a' + self.0) as char
    }

    pub fn all() -> impl Iterator<Item = Var> {
        (0..ALPHABET as u8).map(Var)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A set of variables stored as a 26-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet(u32);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn from_bits(bits: u32) -> VarSet {
        VarSet(bits & ((1 << ALPHABET) - 1))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn insert(&mut self, v: Var) {
        self.0 |= 1 << v.index();
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 & (1 << v.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn difference(self, other: VarSet) -> VarSet {
        VarSet(self.0 & !other.0)
    }

    /// Members in alphabetical order.
    pub fn iter(self) -> impl Iterator<Item = Var> {
        Var::all().filter(move |v| self.contains(*v))
    }
}

impl FromIterator<Var> for VarSet {
    fn from_iter<I: IntoIterator<Item = Var>>(iter: I) -> Self {
        let mut set = VarSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Logical connectives. The discriminant doubles as a dense index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Not = 0,
    And = 1,
    Or = 2,
    Implies = 3,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Not, Op::And, Op::Or, Op::Implies];
    pub const BINARY: [Op; 3] = [Op::And, Op::Or, Op::Implies];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn arity(self) -> usize {
        match self {
            Op::Not => 1,
            _ => 2,
        }
    }

    /// Surface syntax character.
    pub fn symbol(self) -> char {
        match self {
            Op::Not => '~',
            Op::And => '&',
            Op::Or => '|',
            Op::Implies => '>',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Not => "not",
            Op::And => "and",
            Op::Or => "or",
            Op::Implies => "implies",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Variable by letter. Panics outside `a..=z`; intended for literals in code.
    pub fn var(c: char) -> Formula {
        Formula::Var(Var::from_char(c).expect("variable must be a lowercase ascii letter"))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn binary(op: Op, l: Formula, r: Formula) -> Formula {
        match op {
            Op::And => Formula::and(l, r),
            Op::Or => Formula::or(l, r),
            Op::Implies => Formula::implies(l, r),
            Op::Not => panic!("negation is unary"),
        }
    }

    /// The root connective, `None` for a variable.
    pub fn op(&self) -> Option<Op> {
        match self {
            Formula::Var(_) => None,
            Formula::Not(_) => Some(Op::Not),
            Formula::And(..) => Some(Op::And),
            Formula::Or(..) => Some(Op::Or),
            Formula::Implies(..) => Some(Op::Implies),
        }
    }

    pub fn vars(&self) -> VarSet {
        let mut set = VarSet::EMPTY;
        self.visit_vars(&mut |v| set.insert(v));
        set
    }

    /// Calls `f` on every variable occurrence in pre-order, left to right.
    pub fn visit_vars(&self, f: &mut impl FnMut(Var)) {
        match self {
            Formula::Var(v) => f(*v),
            Formula::Not(c) => c.visit_vars(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
        }
    }

    /// Number of AST nodes.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Not(c) => 1 + c.len(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                1 + l.len() + r.len()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Not(c) => 1 + c.depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// Rebuilds the formula with every variable passed through `f`.
    pub fn map_vars(&self, f: &impl Fn(Var) -> Var) -> Formula {
        match self {
            Formula::Var(v) => Formula::Var(f(*v)),
            Formula::Not(c) => Formula::not(c.map_vars(f)),
            Formula::And(l, r) => Formula::and(l.map_vars(f), r.map_vars(f)),
            Formula::Or(l, r) => Formula::or(l.map_vars(f), r.map_vars(f)),
            Formula::Implies(l, r) => Formula::implies(l.map_vars(f), r.map_vars(f)),
        }
    }

    /// Canonical surface form (same as `Display`).
    pub fn print(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Not(c) => write!(f, "~{c}"),
            Formula::And(l, r) => write!(f, "({l}&{r})"),
            Formula::Or(l, r) => write!(f, "({l}|{r})"),
            Formula::Implies(l, r) => write!(f, "({l}>{r})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printer_examples() {
        let p = Formula::var('p');
        let q = Formula::var('q');
        assert_eq!(Formula::and(p.clone(), q).print(), "(p&q)");
        assert_eq!(Formula::not(Formula::not(Formula::var('a'))).print(), "~~a");
        let f = Formula::implies(Formula::or(Formula::var('g'), p), Formula::var('r'));
        assert_eq!(f.print(), "((g|p)>r)");
    }

    #[test]
    fn var_bounds() {
        assert!(Var::from_char('A').is_none());
        assert!(Var::new(26).is_none());
        assert_eq!(Var::from_char('z').unwrap().index(), 25);
    }

    #[test]
    fn varset_ops() {
        let f = Formula::and(
            Formula::var('p'),
            Formula::or(Formula::var('q'), Formula::var('p')),
        );
        let vs = f.vars();
        assert_eq!(vs.len(), 2);
        assert_eq!(vs.iter().map(Var::as_char).collect::<String>(), "pq");
        let g = Formula::var('q').vars();
        assert_eq!(vs.difference(g).len(), 1);
    }
}
