//! Sentences and quantifier-free formulas of existential logic on words.
//!
//! The fragment is Boolean combinations of single blocks of existential
//! quantifiers over letter atoms and named numerical predicates:
//!
//! ```text
//! sentence := or ;  or := and ('|' and)* ;  and := not ('&' not)* ;
//! not      := '!' not | '(' sentence ')' | block ;
//! block    := 'E' var+ '.' qf ;  qf := same Boolean grammar over atoms ;
//! atom     := LETTER '(' var ')' | NAME '(' var (',' var)* ')' ;
//! var      := 'x' digits ;  LETTER := single alphabet symbol.
//! ```
//!
//! Universal quantifiers are not part of the fragment and are rejected with a
//! dedicated message. Predicates are resolved against a [`PredRegistry`]; uniform
//! ones carry a set spec and support the quantifier-free normal form
//! ⋁_ā (ā(x̄) ∧ Q^ā(x̄)), while extern predicates are evaluation-only hooks.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::upset::{UpSet, UpSetParseError};
use crate::window::TupleSpec;
use crate::words::{Alphabet, AlphabetError, Word};

/// A first-order variable. The grammar's convention is `x1`, `x2`, …, but any
/// identifier is accepted in variable position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub String);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An evaluation-only predicate implementation: `(positions, word_len) -> bool`.
pub type ExternFn = Arc<dyn Fn(&[usize], usize) -> bool + Send + Sync>;

/// Interpretation of a registered predicate.
#[derive(Clone)]
pub enum PredInterp {
    /// A uniform unary predicate backed by an ultimately periodic set.
    Unary(UpSet),
    /// A uniform k-ary predicate backed by a tuple spec.
    Spec(TupleSpec),
    /// An evaluation-only hook. Rejected by normal form and compilation.
    Extern(ExternFn),
    /// Declared `extern` in a file but not bound to an implementation.
    ExternUnbound,
}

impl fmt::Debug for PredInterp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredInterp::Unary(q) => write!(f, "Unary({q})"),
            PredInterp::Spec(s) => write!(f, "Spec({s})"),
            PredInterp::Extern(_) => write!(f, "Extern(..)"),
            PredInterp::ExternUnbound => write!(f, "ExternUnbound"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PredDef {
    pub arity: usize,
    pub interp: PredInterp,
}

/// Named predicates available to the parser and evaluator.
#[derive(Clone, Debug, Default)]
pub struct PredRegistry {
    preds: BTreeMap<String, PredDef>,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("line {line}: duplicate predicate `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Set { line: usize, source: UpSetParseError },
    #[error("line {line}: {source}")]
    Alphabet { line: usize, source: AlphabetError },
    #[error("predicate `{name}`: {msg}")]
    BadDefinition { name: String, msg: String },
}

/// A registry file: an optional `alphabet` line plus `pred` lines.
#[derive(Debug, Default)]
pub struct RegistryFile {
    pub alphabet: Option<Alphabet>,
    pub registry: PredRegistry,
}

impl PredRegistry {
    pub fn new() -> PredRegistry {
        PredRegistry::default()
    }

    pub fn insert(&mut self, name: &str, arity: usize, interp: PredInterp) -> Result<(), RegistryError> {
        if self.preds.contains_key(name) {
            return Err(RegistryError::Duplicate { line: 0, name: name.to_string() });
        }
        let ok = match &interp {
            PredInterp::Unary(_) => arity == 1,
            PredInterp::Spec(spec) => match spec {
                TupleSpec::Product(qs) => qs.len() == arity,
                TupleSpec::Diagonal | TupleSpec::StrictLess | TupleSpec::Successor => arity >= 2,
                _ => arity >= 1,
            },
            PredInterp::Extern(_) | PredInterp::ExternUnbound => arity >= 1,
        };
        if !ok {
            return Err(RegistryError::BadDefinition {
                name: name.to_string(),
                msg: format!("interpretation does not fit arity {arity}"),
            });
        }
        self.preds.insert(name.to_string(), PredDef { arity, interp });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&PredDef> {
        self.preds.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.preds.keys().map(String::as_str)
    }

    /// Binds a previously declared `extern` predicate to an implementation.
    pub fn bind_extern(&mut self, name: &str, f: ExternFn) -> Result<(), RegistryError> {
        match self.preds.get_mut(name) {
            Some(def) => {
                def.interp = PredInterp::Extern(f);
                Ok(())
            }
            None => Err(RegistryError::BadDefinition {
                name: name.to_string(),
                msg: "cannot bind an undeclared extern predicate".into(),
            }),
        }
    }

    /// Parses a registry file. Lines: `alphabet ab` (at most once) and
    /// `pred NAME ARITY SPEC` with SPEC one of `up:…`, `diag`, `lt`, `succ`,
    /// `prod(up:…, up:…)`, `extern`. Blank lines and `#` comments are skipped.
    /// The extern names PRIME and END resolve to built-in interpretations.
    pub fn parse_file(text: &str) -> Result<RegistryFile, RegistryError> {
        let mut out = RegistryFile::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            match parts.next() {
                Some("alphabet") => {
                    let letters = parts.next().ok_or_else(|| RegistryError::Malformed {
                        line,
                        msg: "expected letters after `alphabet`".into(),
                    })?;
                    let alphabet = Alphabet::parse(letters)
                        .map_err(|source| RegistryError::Alphabet { line, source })?;
                    out.alphabet = Some(alphabet);
                }
                Some("pred") => {
                    let name = parts.next().ok_or_else(|| RegistryError::Malformed {
                        line,
                        msg: "expected a predicate name".into(),
                    })?;
                    let arity: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| RegistryError::Malformed {
                            line,
                            msg: "expected a numeric arity".into(),
                        })?;
                    let rest: String = parts.collect::<Vec<_>>().join(" ");
                    if rest.is_empty() {
                        return Err(RegistryError::Malformed {
                            line,
                            msg: "expected a predicate spec".into(),
                        });
                    }
                    let interp = parse_spec(&rest, name, line)?;
                    out.registry
                        .insert(name, arity, interp)
                        .map_err(|e| match e {
                            RegistryError::Duplicate { name, .. } => {
                                RegistryError::Duplicate { line, name }
                            }
                            other => other,
                        })?;
                }
                Some(other) => {
                    return Err(RegistryError::Malformed {
                        line,
                        msg: format!("unknown directive `{other}`"),
                    })
                }
                None => unreachable!(),
            }
        }
        Ok(out)
    }
}

fn parse_spec(text: &str, name: &str, line: usize) -> Result<PredInterp, RegistryError> {
    let text = text.trim();
    if text.starts_with("up:") {
        let set = UpSet::parse(text).map_err(|source| RegistryError::Set { line, source })?;
        return Ok(PredInterp::Unary(set));
    }
    match text {
        "diag" => return Ok(PredInterp::Spec(TupleSpec::Diagonal)),
        "lt" => return Ok(PredInterp::Spec(TupleSpec::StrictLess)),
        "succ" => return Ok(PredInterp::Spec(TupleSpec::Successor)),
        "extern" => return Ok(builtin_extern(name)),
        _ => {}
    }
    if let Some(body) = text.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
        let mut sets = Vec::new();
        for part in body.split(',') {
            let set = UpSet::parse(part.trim())
                .map_err(|source| RegistryError::Set { line, source })?;
            sets.push(set);
        }
        return Ok(PredInterp::Spec(TupleSpec::Product(sets)));
    }
    Err(RegistryError::Malformed { line, msg: format!("unknown predicate spec `{text}`") })
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn builtin_extern(name: &str) -> PredInterp {
    match name.to_ascii_uppercase().as_str() {
        "PRIME" => PredInterp::Extern(Arc::new(|t: &[usize], _len| is_prime(t[0]))),
        // The classic non-uniform example: the last position of the word.
        "END" => PredInterp::Extern(Arc::new(|t: &[usize], len| len > 0 && t[0] == len - 1)),
        _ => PredInterp::ExternUnbound,
    }
}

/// Abstract syntax of the fragment. Sentences are Boolean combinations of
/// [`Formula::Exists`] blocks whose matrices are quantifier-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Letter(char, Var),
    Pred(String, Vec<Var>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
    registry: &'a PredRegistry,
}

impl<'a> Parser<'a> {
    fn new(text: &str, alphabet: &'a Alphabet, registry: &'a PredRegistry) -> Parser<'a> {
        Parser { chars: text.chars().collect(), pos: 0, alphabet, registry }
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(self.pos, format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_alphanumeric() || c == '_' {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if s.is_empty() {
            self.pos = start;
            None
        } else {
            Some((s, start))
        }
    }

    fn sentence(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.sentence_and()?;
        while self.eat('|') {
            let rhs = self.sentence_and()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn sentence_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.sentence_not()?;
        while self.eat('&') {
            let rhs = self.sentence_not()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn sentence_not(&mut self) -> Result<Formula, ParseError> {
        if self.eat('!') {
            return Ok(Formula::Not(Box::new(self.sentence_not()?)));
        }
        if self.eat('(') {
            let inner = self.sentence()?;
            self.expect(')')?;
            return Ok(inner);
        }
        self.block()
    }

    fn block(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let Some((head, start)) = self.ident() else {
            return self.err(at, "expected an existential block `E x1 … . φ`");
        };
        match head.as_str() {
            "E" => {}
            "A" => {
                return self.err(
                    start,
                    "universal quantifiers are not part of this fragment \
                     (Boolean combinations of purely existential blocks only)",
                )
            }
            other => {
                return self.err(start, format!("expected `E` to open a block, found `{other}`"))
            }
        }
        let mut vars = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some('.') {
                break;
            }
            let Some((name, vstart)) = self.ident() else {
                return self.err(self.pos, "expected a variable or `.` in the quantifier block");
            };
            let var = Var(name);
            if vars.contains(&var) {
                return self.err(vstart, format!("duplicate variable `{var}` in the block"));
            }
            vars.push(var);
        }
        self.expect('.')?;
        if vars.is_empty() {
            return self.err(self.pos, "an existential block needs at least one variable");
        }
        let matrix = self.qf()?;
        for v in free_vars(&matrix) {
            if !vars.contains(&v) {
                return self.err(self.pos, format!("unbound variable `{v}`"));
            }
        }
        Ok(Formula::Exists(vars, Box::new(matrix)))
    }

    fn qf(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.qf_and()?;
        while self.eat('|') {
            let rhs = self.qf_and()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn qf_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.qf_not()?;
        while self.eat('&') {
            let rhs = self.qf_not()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn qf_not(&mut self) -> Result<Formula, ParseError> {
        if self.eat('!') {
            return Ok(Formula::Not(Box::new(self.qf_not()?)));
        }
        if self.eat('(') {
            let inner = self.qf()?;
            self.expect(')')?;
            return Ok(inner);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        let Some((name, start)) = self.ident() else {
            return self.err(self.pos, "expected an atom");
        };
        self.expect('(')?;
        let mut args = Vec::new();
        loop {
            let Some((arg, _)) = self.ident() else {
                return self.err(self.pos, "expected a variable");
            };
            args.push(Var(arg));
            if !self.eat(',') {
                break;
            }
        }
        self.expect(')')?;
        let mut letters = name.chars();
        let first = letters.next().unwrap();
        if letters.next().is_none() && self.alphabet.contains(first) {
            if args.len() != 1 {
                return self.err(start, format!("letter predicate `{first}` takes one variable"));
            }
            return Ok(Formula::Letter(first, args.into_iter().next().unwrap()));
        }
        match self.registry.get(&name) {
            Some(def) => {
                if def.arity != args.len() {
                    return self.err(
                        start,
                        format!(
                            "predicate `{name}` has arity {}, applied to {} variables",
                            def.arity,
                            args.len()
                        ),
                    );
                }
                Ok(Formula::Pred(name, args))
            }
            None => self.err(start, format!("unknown predicate `{name}`")),
        }
    }

    fn finish(&mut self, formula: Formula) -> Result<Formula, ParseError> {
        self.skip_ws();
        if self.pos < self.chars.len() {
            return self.err(self.pos, "trailing input after the formula");
        }
        Ok(formula)
    }
}

fn free_vars(phi: &Formula) -> Vec<Var> {
    let mut out = Vec::new();
    collect_vars(phi, &mut out);
    out
}

fn collect_vars(phi: &Formula, out: &mut Vec<Var>) {
    match phi {
        Formula::Letter(_, v) => out.push(v.clone()),
        Formula::Pred(_, args) => out.extend(args.iter().cloned()),
        Formula::Not(inner) => collect_vars(inner, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Formula::Exists(vars, matrix) => {
            let mut inner = Vec::new();
            collect_vars(matrix, &mut inner);
            out.extend(inner.into_iter().filter(|v| !vars.contains(v)));
        }
    }
}

/// Parses a sentence (a Boolean combination of existential blocks).
pub fn parse_sentence(
    text: &str,
    alphabet: &Alphabet,
    registry: &PredRegistry,
) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, alphabet, registry);
    let phi = p.sentence()?;
    p.finish(phi)
}

/// Parses a quantifier-free formula with free variables.
pub fn parse_qf(
    text: &str,
    alphabet: &Alphabet,
    registry: &PredRegistry,
) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, alphabet, registry);
    let phi = p.qf()?;
    p.finish(phi)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` has no assigned position")]
    Unassigned(String),
    #[error("position {pos} assigned to `{var}` is out of range for a word of length {len}")]
    PositionOutOfRange { var: String, pos: usize, len: usize },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("extern predicate `{0}` is declared but not bound to an implementation")]
    UnboundExtern(String),
}

/// Evaluates a formula on a word under an assignment of positions to the free
/// variables. All assigned positions must be < |w|.
pub fn eval(
    phi: &Formula,
    w: &Word,
    assignment: &BTreeMap<Var, usize>,
    registry: &PredRegistry,
) -> Result<bool, EvalError> {
    let mut env = assignment.clone();
    for (v, &p) in assignment {
        if p >= w.len() {
            return Err(EvalError::PositionOutOfRange { var: v.0.clone(), pos: p, len: w.len() });
        }
    }
    eval_in(phi, w, &mut env, registry)
}

/// Evaluates a sentence (no free variables, so no assignment is needed).
pub fn eval_sentence(phi: &Formula, w: &Word, registry: &PredRegistry) -> Result<bool, EvalError> {
    let mut env = BTreeMap::new();
    eval_in(phi, w, &mut env, registry)
}

fn eval_in(
    phi: &Formula,
    w: &Word,
    env: &mut BTreeMap<Var, usize>,
    registry: &PredRegistry,
) -> Result<bool, EvalError> {
    match phi {
        Formula::Letter(a, v) => {
            let &pos = env.get(v).ok_or_else(|| EvalError::Unassigned(v.0.clone()))?;
            Ok(w.get(pos) == Some(*a))
        }
        Formula::Pred(name, args) => {
            let def = registry
                .get(name)
                .ok_or_else(|| EvalError::UnknownPredicate(name.clone()))?;
            let mut tuple = Vec::with_capacity(args.len());
            for v in args {
                let &pos = env.get(v).ok_or_else(|| EvalError::Unassigned(v.0.clone()))?;
                tuple.push(pos);
            }
            match &def.interp {
                PredInterp::Unary(q) => Ok(q.contains(tuple[0])),
                PredInterp::Spec(spec) => Ok(spec.contains(&tuple)),
                PredInterp::Extern(f) => Ok(f(&tuple, w.len())),
                PredInterp::ExternUnbound => Err(EvalError::UnboundExtern(name.clone())),
            }
        }
        Formula::Not(inner) => Ok(!eval_in(inner, w, env, registry)?),
        Formula::And(a, b) => Ok(eval_in(a, w, env, registry)? && eval_in(b, w, env, registry)?),
        Formula::Or(a, b) => Ok(eval_in(a, w, env, registry)? || eval_in(b, w, env, registry)?),
        Formula::Exists(vars, matrix) => {
            // Every variable of the block ranges over all positions; several
            // variables may mark the same position.
            let k = vars.len();
            let n = w.len();
            if n == 0 {
                return Ok(false);
            }
            let mut tuple = vec![0usize; k];
            loop {
                for (v, &p) in vars.iter().zip(&tuple) {
                    env.insert(v.clone(), p);
                }
                let hit = eval_in(matrix, w, env, registry)?;
                for v in vars {
                    env.remove(v);
                }
                if hit {
                    return Ok(true);
                }
                // Odometer over |w|^k.
                let mut slot = k;
                loop {
                    if slot == 0 {
                        return Ok(false);
                    }
                    slot -= 1;
                    tuple[slot] += 1;
                    if tuple[slot] < n {
                        break;
                    }
                    tuple[slot] = 0;
                }
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalFormError {
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{0}` is not uniform; it cannot appear in a normal form")]
    NonUniform(String),
    #[error("variable `{0}` is not among the normal form's variables")]
    UnknownVariable(String),
}

/// The quantifier-free normal form ⋁_ā (ā(x̄) ∧ Q^ā(x̄)): one set spec per
/// letter tuple, over a fixed variable order.
#[derive(Debug, Clone)]
pub struct NormalForm {
    vars: Vec<Var>,
    clauses: Vec<(Vec<char>, TupleSpec)>,
}

impl NormalForm {
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn clauses(&self) -> &[(Vec<char>, TupleSpec)] {
        &self.clauses
    }

    pub fn clause(&self, letters: &[char]) -> Option<&TupleSpec> {
        self.clauses.iter().find(|(l, _)| l == letters).map(|(_, s)| s)
    }

    /// Evaluates the normal form at a position tuple: look up the letters the
    /// word carries there and test the tuple against that clause's set.
    pub fn eval(&self, w: &Word, positions: &[usize]) -> bool {
        debug_assert_eq!(positions.len(), self.arity());
        let letters: Vec<char> = positions.iter().map(|&i| {
            w.get(i).expect("position out of range")
        }).collect();
        self.clause(&letters).map(|spec| spec.contains(positions)).unwrap_or(false)
    }

    /// For arity 1, the clauses as plain sets.
    pub fn unary(&self) -> Option<Vec<(char, UpSet)>> {
        if self.arity() != 1 {
            return None;
        }
        self.clauses
            .iter()
            .map(|(l, s)| s.to_upset().map(|q| (l[0], q)))
            .collect()
    }
}

/// Computes the normal form of a quantifier-free formula over the ordered
/// variables `vars`. Fails on extern (non-uniform) predicates.
pub fn normal_form(
    qf: &Formula,
    vars: &[Var],
    alphabet: &Alphabet,
    registry: &PredRegistry,
) -> Result<NormalForm, NormalFormError> {
    let k = vars.len();
    let mut clauses = Vec::new();
    for letters in alphabet.tuples(k) {
        let mut spec = transform(qf, &letters, vars, registry)?;
        if k == 1 {
            // At arity 1 the spec algebra collapses to the UpSet algebra.
            let q = spec.to_upset().expect("arity-1 specs always reduce");
            spec = if q.is_empty() {
                TupleSpec::Empty
            } else if q.is_all() {
                TupleSpec::Full
            } else {
                TupleSpec::Product(vec![q])
            };
        }
        clauses.push((letters, spec));
    }
    Ok(NormalForm { vars: vars.to_vec(), clauses })
}

fn transform(
    phi: &Formula,
    letters: &[char],
    vars: &[Var],
    registry: &PredRegistry,
) -> Result<TupleSpec, NormalFormError> {
    let coord = |v: &Var| -> Result<usize, NormalFormError> {
        vars.iter()
            .position(|u| u == v)
            .ok_or_else(|| NormalFormError::UnknownVariable(v.0.clone()))
    };
    Ok(match phi {
        Formula::Letter(a, v) => {
            // Under the fixed letter tuple ā, a letter atom is a constant.
            if letters[coord(v)?] == *a {
                TupleSpec::Full
            } else {
                TupleSpec::Empty
            }
        }
        Formula::Pred(name, args) => {
            let def = registry
                .get(name)
                .ok_or_else(|| NormalFormError::UnknownPredicate(name.clone()))?;
            let coords: Vec<usize> = args.iter().map(coord).collect::<Result<_, _>>()?;
            let base = match &def.interp {
                PredInterp::Unary(q) => TupleSpec::Product(vec![q.clone()]),
                PredInterp::Spec(s) => s.clone(),
                PredInterp::Extern(_) | PredInterp::ExternUnbound => {
                    return Err(NormalFormError::NonUniform(name.clone()))
                }
            };
            if coords.len() == vars.len() && coords.iter().enumerate().all(|(i, &c)| i == c) {
                base
            } else {
                TupleSpec::Reindex(coords, Box::new(base))
            }
        }
        Formula::Not(inner) => simplify_not(transform(inner, letters, vars, registry)?),
        Formula::And(a, b) => simplify_and(
            transform(a, letters, vars, registry)?,
            transform(b, letters, vars, registry)?,
        ),
        Formula::Or(a, b) => simplify_or(
            transform(a, letters, vars, registry)?,
            transform(b, letters, vars, registry)?,
        ),
        Formula::Exists(..) => return Err(NormalFormError::NotQuantifierFree),
    })
}

fn simplify_not(s: TupleSpec) -> TupleSpec {
    match s {
        TupleSpec::Empty => TupleSpec::Full,
        TupleSpec::Full => TupleSpec::Empty,
        TupleSpec::Not(inner) => *inner,
        other => TupleSpec::Not(Box::new(other)),
    }
}

fn simplify_and(a: TupleSpec, b: TupleSpec) -> TupleSpec {
    match (a, b) {
        (TupleSpec::Empty, _) | (_, TupleSpec::Empty) => TupleSpec::Empty,
        (TupleSpec::Full, other) | (other, TupleSpec::Full) => other,
        (a, b) => TupleSpec::And(Box::new(a), Box::new(b)),
    }
}

fn simplify_or(a: TupleSpec, b: TupleSpec) -> TupleSpec {
    match (a, b) {
        (TupleSpec::Full, _) | (_, TupleSpec::Full) => TupleSpec::Full,
        (TupleSpec::Empty, other) | (other, TupleSpec::Empty) => other,
        (a, b) => TupleSpec::Or(Box::new(a), Box::new(b)),
    }
}

/// A Boolean expression over generator languages L_{◇^ā_Q}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenExpr {
    Const(bool),
    /// Words having some occurrence of the letter tuple at a position tuple in
    /// the set.
    Atom { letters: Vec<char>, set: TupleSpec },
    Not(Box<GenExpr>),
    And(Box<GenExpr>, Box<GenExpr>),
    Or(Box<GenExpr>, Box<GenExpr>),
}

impl GenExpr {
    /// Evaluates the generator expression directly on a word.
    pub fn eval_word(&self, w: &Word) -> bool {
        match self {
            GenExpr::Const(b) => *b,
            GenExpr::Atom { letters, set } => !w.content_in(letters, set).is_empty(),
            GenExpr::Not(inner) => !inner.eval_word(w),
            GenExpr::And(a, b) => a.eval_word(w) && b.eval_word(w),
            GenExpr::Or(a, b) => a.eval_word(w) || b.eval_word(w),
        }
    }

    /// All atoms, in left-to-right order.
    pub fn atoms(&self) -> Vec<(&[char], &TupleSpec)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<(&'a [char], &'a TupleSpec)>) {
        match self {
            GenExpr::Const(_) => {}
            GenExpr::Atom { letters, set } => out.push((letters, set)),
            GenExpr::Not(inner) => inner.collect_atoms(out),
            GenExpr::And(a, b) | GenExpr::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

/// Translates a sentence into a Boolean combination of generators: each block
/// becomes ⋃_ā L_{◇^ā_{Q^ā}} through its normal form (the existential quantifier
/// commutes with the disjunction over letter tuples).
pub fn sentence_to_generators(
    phi: &Formula,
    alphabet: &Alphabet,
    registry: &PredRegistry,
) -> Result<GenExpr, NormalFormError> {
    Ok(match phi {
        Formula::Not(inner) => {
            GenExpr::Not(Box::new(sentence_to_generators(inner, alphabet, registry)?))
        }
        Formula::And(a, b) => GenExpr::And(
            Box::new(sentence_to_generators(a, alphabet, registry)?),
            Box::new(sentence_to_generators(b, alphabet, registry)?),
        ),
        Formula::Or(a, b) => GenExpr::Or(
            Box::new(sentence_to_generators(a, alphabet, registry)?),
            Box::new(sentence_to_generators(b, alphabet, registry)?),
        ),
        Formula::Exists(vars, matrix) => {
            let nf = normal_form(matrix, vars, alphabet, registry)?;
            let mut expr: Option<GenExpr> = None;
            for (letters, spec) in nf.clauses() {
                if *spec == TupleSpec::Empty {
                    continue;
                }
                let atom = GenExpr::Atom { letters: letters.clone(), set: spec.clone() };
                expr = Some(match expr {
                    None => atom,
                    Some(prev) => GenExpr::Or(Box::new(prev), Box::new(atom)),
                });
            }
            expr.unwrap_or(GenExpr::Const(false))
        }
        Formula::Letter(..) | Formula::Pred(..) => return Err(NormalFormError::NotQuantifierFree),
    })
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_ctx(f, 0, true)
    }
}

impl Formula {
    // Precedence: 0 = or, 1 = and, 2 = not. A block swallows everything up to
    // the end of its scope, so it needs parentheses unless it is the rightmost
    // leaf of the current scope (`last`); a closing parenthesis opens a fresh
    // scope.
    fn fmt_ctx(&self, f: &mut fmt::Formatter<'_>, prec: u8, last: bool) -> fmt::Result {
        match self {
            Formula::Letter(a, v) => write!(f, "{a}({v})"),
            Formula::Pred(name, args) => {
                write!(f, "{name}(")?;
                for (i, v) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
            Formula::Not(inner) => {
                write!(f, "!")?;
                inner.fmt_ctx(f, 2, last)
            }
            Formula::And(a, b) => {
                let wrap = prec > 1;
                if wrap {
                    write!(f, "(")?;
                }
                a.fmt_ctx(f, 1, false)?;
                write!(f, " & ")?;
                b.fmt_ctx(f, 2, wrap || last)?;
                if wrap {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Or(a, b) => {
                let wrap = prec > 0;
                if wrap {
                    write!(f, "(")?;
                }
                a.fmt_ctx(f, 0, false)?;
                write!(f, " | ")?;
                b.fmt_ctx(f, 1, wrap || last)?;
                if wrap {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Exists(vars, matrix) => {
                if !last {
                    write!(f, "(")?;
                }
                write!(f, "E")?;
                for v in vars {
                    write!(f, " {v}")?;
                }
                write!(f, " . ")?;
                matrix.fmt_ctx(f, 0, true)?;
                if !last {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}
