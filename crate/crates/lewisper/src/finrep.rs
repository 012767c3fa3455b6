//! Finite-image representations of the modular group, group words, coset
//! permutation representations and isotypic projectors.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type CMat = DMatrix<C64>;
pub type IntMat = [[i64; 2]; 2];

pub const RELATION_TOL: f64 = 1e-12;
pub const DEFAULT_ORDER_BOUND: usize = 120;

pub fn max_norm(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn identity_defect(m: &CMat) -> f64 {
    max_norm(&(m - CMat::identity(m.nrows(), m.ncols())))
}

/// Representation given by the images of S and T.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRep {
    dim: usize,
    mat_s: CMat,
    mat_t: CMat,
    order_t: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub s_squared: f64,
    pub st_cubed: f64,
    pub unitary_s: f64,
    pub unitary_t: f64,
    pub order_t: usize,
    pub pass: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "|S^2 - I|      = {:.3e}", self.s_squared)?;
        writeln!(f, "|(ST)^3 - I|   = {:.3e}", self.st_cubed)?;
        writeln!(f, "|SS* - I|      = {:.3e}", self.unitary_s)?;
        writeln!(f, "|TT* - I|      = {:.3e}", self.unitary_t)?;
        writeln!(f, "N              = {}", self.order_t)?;
        write!(f, "status         = {}", if self.pass { "pass" } else { "fail" })
    }
}

fn order_of(t: &CMat, bound: usize) -> Option<usize> {
    let mut p = t.clone();
    for m in 1..=bound {
        if identity_defect(&p) < 1e-10 {
            return Some(m);
        }
        p = &p * t;
    }
    None
}

/// Checks the defining relations, unitarity and finds the order of η(T).
pub fn validate_rep(mat_s: &CMat, mat_t: &CMat, order_bound: usize) -> Result<ValidationReport> {
    let d = mat_s.nrows();
    if d == 0 || !mat_s.is_square() || !mat_t.is_square() || mat_t.nrows() != d {
        return Err(Error::Dimension(format!(
            "S is {}x{}, T is {}x{}",
            mat_s.nrows(),
            mat_s.ncols(),
            mat_t.nrows(),
            mat_t.ncols()
        )));
    }
    let order_t = order_of(mat_t, order_bound).ok_or(Error::OrderNotFound { bound: order_bound })?;
    let st = mat_s * mat_t;
    let s_squared = identity_defect(&(mat_s * mat_s));
    let st_cubed = identity_defect(&(&st * &st * &st));
    let unitary_s = identity_defect(&(mat_s * mat_s.adjoint()));
    let unitary_t = identity_defect(&(mat_t * mat_t.adjoint()));
    let pass = [s_squared, st_cubed, unitary_s, unitary_t].iter().all(|&r| r < RELATION_TOL);
    Ok(ValidationReport { s_squared, st_cubed, unitary_s, unitary_t, order_t, pass })
}

impl FiniteRep {
    pub fn new(mat_s: CMat, mat_t: CMat) -> Result<Self> {
        Self::with_bound(mat_s, mat_t, DEFAULT_ORDER_BOUND)
    }

    pub fn with_bound(mat_s: CMat, mat_t: CMat, bound: usize) -> Result<Self> {
        let rep = validate_rep(&mat_s, &mat_t, bound)?;
        if !rep.pass {
            return Err(Error::InvalidRep(format!("relations fail:\n{rep}")));
        }
        Ok(Self { dim: mat_s.nrows(), mat_s, mat_t, order_t: rep.order_t })
    }

    pub fn trivial() -> Self {
        let one = CMat::identity(1, 1);
        Self { dim: 1, mat_s: one.clone(), mat_t: one, order_t: 1 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn order_t(&self) -> usize {
        self.order_t
    }
    pub fn mat_s(&self) -> &CMat {
        &self.mat_s
    }
    pub fn mat_t(&self) -> &CMat {
        &self.mat_t
    }

    pub fn is_trivial(&self) -> bool {
        self.dim == 1 && identity_defect(&self.mat_s) < RELATION_TOL && self.order_t == 1
    }

    pub fn validate(&self) -> ValidationReport {
        validate_rep(&self.mat_s, &self.mat_t, self.order_t).expect("constructed representation")
    }

    pub fn generator(&self, g: Gen) -> CMat {
        match g {
            Gen::S => self.mat_s.clone(),
            Gen::T => self.mat_t.clone(),
            Gen::TInv => self.mat_t.adjoint(),
            // T' = S T^{-1} S
            Gen::TP => &self.mat_s * self.mat_t.adjoint() * &self.mat_s,
            Gen::TPInv => &self.mat_s * &self.mat_t * &self.mat_s,
        }
    }

    pub fn of_word(&self, w: &GroupWord) -> CMat {
        let mut m = CMat::identity(self.dim, self.dim);
        for &g in &w.tokens {
            m *= self.generator(g);
        }
        m
    }

    /// η(T)^n for any integer n, using the period N.
    pub fn t_power(&self, n: i64) -> CMat {
        let r = n.rem_euclid(self.order_t as i64) as usize;
        let mut m = CMat::identity(self.dim, self.dim);
        for _ in 0..r {
            m *= &self.mat_t;
        }
        m
    }

    pub fn identity(&self) -> CMat {
        CMat::identity(self.dim, self.dim)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &FiniteRep) -> Result<FiniteRep> {
        let d = self.dim + other.dim;
        let mut s = CMat::zeros(d, d);
        let mut t = CMat::zeros(d, d);
        s.view_mut((0, 0), (self.dim, self.dim)).copy_from(&self.mat_s);
        s.view_mut((self.dim, self.dim), (other.dim, other.dim)).copy_from(&other.mat_s);
        t.view_mut((0, 0), (self.dim, self.dim)).copy_from(&self.mat_t);
        t.view_mut((self.dim, self.dim), (other.dim, other.dim)).copy_from(&other.mat_t);
        FiniteRep::new(s, t)
    }
}

pub fn rep_of_word(rep: &FiniteRep, w: &GroupWord) -> CMat {
    rep.of_word(w)
}

/// Generators and their inverses; T' is the lower unipotent matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    S,
    T,
    TInv,
    TP,
    TPInv,
}

impl Gen {
    pub fn matrix(self) -> IntMat {
        match self {
            Gen::S => [[0, -1], [1, 0]],
            Gen::T => [[1, 1], [0, 1]],
            Gen::TInv => [[1, -1], [0, 1]],
            Gen::TP => [[1, 0], [1, 1]],
            Gen::TPInv => [[1, 0], [-1, 1]],
        }
    }

    pub fn inverse(self) -> Gen {
        match self {
            Gen::S => Gen::S,
            Gen::T => Gen::TInv,
            Gen::TInv => Gen::T,
            Gen::TP => Gen::TPInv,
            Gen::TPInv => Gen::TP,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Gen::S => "S",
            Gen::T => "T",
            Gen::TInv => "T^-1",
            Gen::TP => "T'",
            Gen::TPInv => "T'^-1",
        }
    }
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

pub fn mat_inv(a: &IntMat) -> IntMat {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

pub const IDENTITY: IntMat = [[1, 0], [0, 1]];

/// Word in the generators together with its integer matrix (up to sign).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupWord {
    tokens: Vec<Gen>,
    int_matrix: IntMat,
}

impl GroupWord {
    pub fn new(tokens: Vec<Gen>) -> Self {
        let int_matrix = tokens.iter().fold(IDENTITY, |m, g| mat_mul(&m, &g.matrix()));
        Self { tokens, int_matrix }
    }

    pub fn identity() -> Self {
        Self::new(Vec::new())
    }

    pub fn tokens(&self) -> &[Gen] {
        &self.tokens
    }

    pub fn int_matrix(&self) -> IntMat {
        self.int_matrix
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut t = self.tokens.clone();
        t.extend_from_slice(&other.tokens);
        GroupWord { tokens: t, int_matrix: mat_mul(&self.int_matrix, &other.int_matrix) }
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord::new(self.tokens.iter().rev().map(|g| g.inverse()).collect())
    }

    /// True when the word lies in the semigroup generated by T and T'.
    pub fn is_positive(&self) -> bool {
        self.tokens.iter().all(|g| matches!(g, Gen::T | Gen::TP))
    }

    /// Equality in PSL2(Z).
    pub fn same_element(&self, other: &GroupWord) -> bool {
        let (a, b) = (self.int_matrix, other.int_matrix);
        a == b || a == [[-b[0][0], -b[0][1]], [-b[1][0], -b[1][1]]]
    }

    pub fn act(&self, z: C64) -> C64 {
        let m = self.int_matrix;
        (z * m[0][0] as f64 + m[0][1] as f64) / (z * m[1][0] as f64 + m[1][1] as f64)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tokens.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<&str> = self.tokens.iter().map(|g| g.symbol()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for GroupWord {
    type Err = Error;
    /// Whitespace separated tokens among S, T, T^-1, T', T'^-1; "e" is empty.
    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        for tok in s.split_whitespace() {
            tokens.push(match tok {
                "e" => continue,
                "S" => Gen::S,
                "T" => Gen::T,
                "T^-1" | "Ti" => Gen::TInv,
                "T'" | "Tp" => Gen::TP,
                "T'^-1" | "Tpi" => Gen::TPInv,
                _ => return Err(Error::Input(format!("unknown generator `{tok}`"))),
            });
        }
        Ok(GroupWord::new(tokens))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupKind {
    Full,
    Gamma0(u32),
    Gamma(u32),
}

impl SubgroupKind {
    fn level(self) -> i64 {
        match self {
            SubgroupKind::Full => 1,
            SubgroupKind::Gamma0(n) | SubgroupKind::Gamma(n) => n as i64,
        }
    }

    fn contains(self, m: &IntMat) -> bool {
        let n = self.level();
        let r = |x: i64| x.rem_euclid(n);
        match self {
            SubgroupKind::Full => true,
            SubgroupKind::Gamma0(_) => r(m[1][0]) == 0,
            SubgroupKind::Gamma(_) => {
                r(m[0][1]) == 0
                    && r(m[1][0]) == 0
                    && ((r(m[0][0]) == r(1) && r(m[1][1]) == r(1))
                        || (r(m[0][0]) == r(-1) && r(m[1][1]) == r(-1)))
            }
        }
    }

    /// Index in PSL2(Z) from the product formulas.
    pub fn index_formula(self) -> usize {
        let n = self.level() as u64;
        let primes: Vec<u64> = (2..=n).filter(|&p| n.is_multiple_of(p) && (2..p).all(|q| p % q != 0)).collect();
        match self {
            SubgroupKind::Full => 1,
            SubgroupKind::Gamma0(_) => {
                let mut num = n;
                let mut den = 1;
                for &p in &primes {
                    num *= p + 1;
                    den *= p;
                }
                (num / den) as usize
            }
            SubgroupKind::Gamma(_) => {
                if n == 1 {
                    return 1;
                }
                let mut num = n * n * n;
                let mut den = 1;
                for &p in &primes {
                    num *= p * p - 1;
                    den *= p * p;
                }
                let sl = num / den;
                (if n <= 2 { sl } else { sl / 2 }) as usize
            }
        }
    }
}

/// Left cosets γΛ of a congruence subgroup with the action of S and T.
#[derive(Debug, Clone)]
pub struct CosetStructure {
    pub subgroup_kind: SubgroupKind,
    pub cosets: Vec<IntMat>,
    pub perm_t: Vec<usize>,
    pub perm_s: Vec<usize>,
}

impl CosetStructure {
    pub fn new(kind: SubgroupKind) -> Result<Self> {
        if kind.level() < 1 {
            return Err(Error::Input("level must be positive".into()));
        }
        let n = kind.level();
        let reduce = |m: &IntMat| -> IntMat {
            let mut r = [[0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    r[i][j] = m[i][j].rem_euclid(n);
                }
            }
            r
        };
        let find = |cosets: &[IntMat], g: &IntMat| -> Option<usize> {
            cosets.iter().position(|c| kind.contains(&reduce(&mat_mul(&mat_inv(c), g))))
        };
        let mut cosets = vec![IDENTITY];
        let mut perm_t = Vec::new();
        let mut perm_s = Vec::new();
        let mut i = 0;
        while i < cosets.len() {
            for (gen, perm) in [(Gen::T, &mut perm_t), (Gen::S, &mut perm_s)] {
                let g = reduce(&mat_mul(&gen.matrix(), &cosets[i]));
                let j = match find(&cosets, &g) {
                    Some(j) => j,
                    None => {
                        cosets.push(g);
                        cosets.len() - 1
                    }
                };
                perm.push(j);
            }
            i += 1;
        }
        let cs = Self { subgroup_kind: kind, cosets, perm_t, perm_s };
        cs.check()?;
        Ok(cs)
    }

    pub fn index(&self) -> usize {
        self.cosets.len()
    }

    fn check(&self) -> Result<()> {
        let n = self.index();
        let ok_s = (0..n).all(|i| self.perm_s[self.perm_s[i]] == i);
        let st = |i: usize| self.perm_s[self.perm_t[i]];
        let ok_st = (0..n).all(|i| st(st(st(i))) == i);
        if ok_s && ok_st {
            Ok(())
        } else {
            Err(Error::InvalidRep("coset permutations violate the relations".into()))
        }
    }
}

fn perm_matrix(p: &[usize]) -> CMat {
    let n = p.len();
    let mut m = CMat::zeros(n, n);
    for (i, &j) in p.iter().enumerate() {
        m[(j, i)] = C64::new(1.0, 0.0);
    }
    m
}

pub fn coset_perm_rep(c: &CosetStructure) -> Result<FiniteRep> {
    c.check()?;
    FiniteRep::new(perm_matrix(&c.perm_s), perm_matrix(&c.perm_t))
}

/// Elements of PSL2(Z/n) with a word for each and a multiplication table.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    pub modulus: i64,
    pub elements: Vec<IntMat>,
    pub words: Vec<GroupWord>,
    pub table: Vec<Vec<usize>>,
}

impl QuotientGroup {
    pub fn psl2(n: u32) -> Self {
        let n = n as i64;
        let canon = |m: &IntMat| -> IntMat {
            let r = |x: i64| x.rem_euclid(n);
            let a = [[r(m[0][0]), r(m[0][1])], [r(m[1][0]), r(m[1][1])]];
            let b = [[r(-m[0][0]), r(-m[0][1])], [r(-m[1][0]), r(-m[1][1])]];
            a.min(b)
        };
        let mut index: HashMap<IntMat, usize> = HashMap::new();
        let mut elements = vec![canon(&IDENTITY)];
        let mut words = vec![GroupWord::identity()];
        index.insert(elements[0], 0);
        let mut i = 0;
        while i < elements.len() {
            for g in [Gen::S, Gen::T] {
                let e = canon(&mat_mul(&elements[i], &g.matrix()));
                if let std::collections::hash_map::Entry::Vacant(v) = index.entry(e) {
                    v.insert(elements.len());
                    elements.push(e);
                    words.push(words[i].concat(&GroupWord::new(vec![g])));
                }
            }
            i += 1;
        }
        let table = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&canon(&mat_mul(a, b))]).collect())
            .collect();
        Self { modulus: n, elements, words, table }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Left regular action matrices, one per element.
    pub fn regular_action(&self) -> Vec<CMat> {
        let n = self.order();
        (0..n).map(|g| perm_matrix(&self.table[g])).collect()
    }

    /// Character of a representation factoring through this quotient.
    pub fn character(&self, rep: &FiniteRep) -> Vec<C64> {
        self.words.iter().map(|w| rep.of_word(w).trace()).collect()
    }

    pub fn action(&self, rep: &FiniteRep) -> Vec<CMat> {
        self.words.iter().map(|w| rep.of_word(w)).collect()
    }
}

/// P = (d/|G|) Σ conj(χ(γ)) ρ(γ)
pub fn isotypic_projector(action: &[CMat], character: &[C64], degree: usize, group_order: usize) -> Result<CMat> {
    if action.len() != group_order || character.len() != group_order || group_order == 0 {
        return Err(Error::Input(format!(
            "{} actions and {} character values for a group of order {group_order}",
            action.len(),
            character.len()
        )));
    }
    let n = action[0].nrows();
    if action.iter().any(|a| a.nrows() != n || a.ncols() != n) {
        return Err(Error::Input("action matrices differ in size".into()));
    }
    let mut p = CMat::zeros(n, n);
    for (a, chi) in action.iter().zip(character) {
        p += a * chi.conj();
    }
    Ok(p * C64::new(degree as f64 / group_order as f64, 0.0))
}

/// Dimension of the common fixed space of η(w) over the given words.
pub fn invariant_subspace_dim(rep: &FiniteRep, subgroup_elements: &[GroupWord]) -> usize {
    let d = rep.dim();
    if subgroup_elements.is_empty() {
        return d;
    }
    let k = subgroup_elements.len();
    let mut stacked = CMat::zeros(k * d, d);
    for (i, w) in subgroup_elements.iter().enumerate() {
        stacked.view_mut((i * d, 0), (d, d)).copy_from(&(rep.of_word(w) - rep.identity()));
    }
    let sv = stacked.svd(false, false).singular_values;
    d - sv.iter().filter(|&&s| s > 1e-9).count()
}

/// Irreducible representations of S3 = PSL2(Z/2): trivial, sign, standard.
pub fn s3_irreps() -> [FiniteRep; 3] {
    let c = |x: f64| C64::new(x, 0.0);
    let h = 3f64.sqrt() / 2.0;
    let sign = FiniteRep::new(CMat::from_element(1, 1, c(-1.0)), CMat::from_element(1, 1, c(-1.0))).unwrap();
    let std = FiniteRep::new(
        CMat::from_row_slice(2, 2, &[c(-0.5), c(h), c(h), c(0.5)]),
        CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
    )
    .unwrap();
    [FiniteRep::trivial(), sign, std]
}

/// Named representations: trivial, s3-sign, s3-std, gamma0:N, gamma:N.
pub fn builtin_rep(name: &str) -> Result<FiniteRep> {
    let name = name.trim();
    if let Some(n) = name.strip_prefix("gamma0:") {
        let n: u32 = n.parse().map_err(|_| Error::Input(format!("bad level in `{name}`")))?;
        return coset_perm_rep(&CosetStructure::new(SubgroupKind::Gamma0(n))?);
    }
    if let Some(n) = name.strip_prefix("gamma:") {
        let n: u32 = n.parse().map_err(|_| Error::Input(format!("bad level in `{name}`")))?;
        return coset_perm_rep(&CosetStructure::new(SubgroupKind::Gamma(n))?);
    }
    let [triv, sign, std] = s3_irreps();
    match name {
        "trivial" => Ok(triv),
        "s3-sign" => Ok(sign),
        "s3-std" => Ok(std),
        _ => Err(Error::Input(format!("unknown representation `{name}`"))),
    }
}

pub fn format_complex(z: C64) -> String {
    format!("{}{:+}j", z.re, z.im)
}

pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = || Error::Input(format!("cannot parse complex entry `{s}`"));
    let t = s.trim();
    let body = t.strip_suffix('j').ok_or_else(bad)?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im: f64 = body[split..].trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

pub fn write_rep(rep: &FiniteRep) -> String {
    let mut out = format!("dim = {}\nN = {}\n", rep.dim, rep.order_t);
    for m in [&rep.mat_s, &rep.mat_t] {
        for i in 0..rep.dim {
            let row: Vec<String> = (0..rep.dim).map(|j| format_complex(m[(i, j)])).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn parse_rep(text: &str) -> Result<FiniteRep> {
    let mut dim = None;
    let mut declared_n = None;
    let mut rows: Vec<(usize, Vec<C64>)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((key, val)) = line.split_once('=') {
            let v: usize = val
                .trim()
                .parse()
                .map_err(|_| Error::Parse { line: ln + 1, msg: format!("bad integer `{}`", val.trim()) })?;
            match key.trim() {
                "dim" => dim = Some(v),
                "N" => declared_n = Some(v),
                k => return Err(Error::Parse { line: ln + 1, msg: format!("unknown key `{k}`") }),
            }
            continue;
        }
        let entries = line
            .split_whitespace()
            .map(parse_complex)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Parse { line: ln + 1, msg: e.to_string() })?;
        rows.push((ln + 1, entries));
    }
    let d = dim.ok_or(Error::Parse { line: 0, msg: "missing `dim =` header".into() })?;
    if rows.len() != 2 * d {
        return Err(Error::Parse { line: 0, msg: format!("expected {} matrix rows, found {}", 2 * d, rows.len()) });
    }
    if let Some((ln, r)) = rows.iter().find(|(_, r)| r.len() != d) {
        return Err(Error::Parse { line: *ln, msg: format!("expected {d} entries, found {}", r.len()) });
    }
    let flat = |rs: &[(usize, Vec<C64>)]| -> CMat {
        CMat::from_row_iterator(d, d, rs.iter().flat_map(|(_, r)| r.iter().copied()))
    };
    let rep = FiniteRep::new(flat(&rows[..d]), flat(&rows[d..]))?;
    if let Some(n) = declared_n {
        if n != rep.order_t {
            return Err(Error::InvalidRep(format!("header says N = {n} but T has order {}", rep.order_t)));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn trivial_and_sign_flip() {
        let one = CMat::identity(1, 1);
        let r = validate_rep(&one, &one, 120).unwrap();
        assert!(r.pass && r.order_t == 1);
        let m = CMat::from_element(1, 1, c(-1.0));
        let r = validate_rep(&m, &one, 120).unwrap();
        assert!(!r.pass);
        assert!((r.st_cubed - 2.0).abs() < 1e-15);
        assert!(FiniteRep::new(m, one).is_err());
    }

    #[test]
    fn errors() {
        let a = CMat::identity(2, 2);
        let b = CMat::identity(3, 3);
        assert!(matches!(validate_rep(&a, &b, 120), Err(Error::Dimension(_))));
        let rot = CMat::from_element(1, 1, C64::from_polar(1.0, 1.0));
        assert!(matches!(validate_rep(&a.view((0, 0), (1, 1)).into(), &rot, 120), Err(Error::OrderNotFound { .. })));
    }

    #[test]
    fn s3_standard_irrep() {
        let [_, sign, std] = s3_irreps();
        assert_eq!(std.order_t(), 2);
        assert_eq!(sign.order_t(), 2);
        let r = std.validate();
        assert!(r.pass && r.s_squared < 1e-15);
        // T' = S T^{-1} S by hand
        let s = std.mat_s();
        let tinv = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        let direct = s * tinv * s;
        let w: GroupWord = "T'".parse().unwrap();
        assert!(max_norm(&(std.of_word(&w) - direct)) < 1e-15);
    }

    #[test]
    fn word_identities() {
        let [_, _, std] = s3_irreps();
        let ss: GroupWord = "S S".parse().unwrap();
        assert!(identity_defect(&std.of_word(&ss)) < 1e-15);
        assert!(ss.same_element(&GroupWord::identity()));
        let lhs: GroupWord = "S T^-1 S T^-1".parse().unwrap();
        let rhs: GroupWord = "T S".parse().unwrap();
        assert!(lhs.same_element(&rhs));
        for rep in [builtin_rep("gamma0:3").unwrap(), std] {
            assert!(max_norm(&(rep.of_word(&lhs) - rep.of_word(&rhs))) < 1e-12);
        }
        let tp: GroupWord = "T'".parse().unwrap();
        assert_eq!(tp.int_matrix(), [[1, 0], [1, 1]]);
        assert!(tp.same_element(&"S T^-1 S".parse().unwrap()));
    }

    #[test]
    fn word_parsing() {
        let w: GroupWord = "S T T'^-1 e".parse().unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.to_string(), "S T T'^-1");
        assert!("S X".parse::<GroupWord>().is_err());
        assert!(w.concat(&w.inverse()).same_element(&GroupWord::identity()));
    }

    #[test]
    fn coset_counts() {
        for n in 1..=12u32 {
            for kind in [SubgroupKind::Gamma0(n), SubgroupKind::Gamma(n)] {
                let cs = CosetStructure::new(kind).unwrap();
                assert_eq!(cs.index(), kind.index_formula(), "{kind:?}");
                assert_eq!(cs.index(), brute_force_index(kind), "{kind:?}");
            }
        }
    }

    // |PSL2(Z/n)| / |image of the subgroup|, by listing all matrices mod n
    fn brute_force_index(kind: SubgroupKind) -> usize {
        let n = kind.level();
        let mut all = std::collections::HashSet::new();
        let mut sub = std::collections::HashSet::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if (a * d - b * c - 1).rem_euclid(n) != 0 {
                            continue;
                        }
                        let m = [[a, b], [c, d]];
                        let neg = [[(-a).rem_euclid(n), (-b).rem_euclid(n)], [(-c).rem_euclid(n), (-d).rem_euclid(n)]];
                        let key = m.min(neg);
                        all.insert(key);
                        if kind.contains(&m) {
                            sub.insert(key);
                        }
                    }
                }
            }
        }
        all.len() / sub.len()
    }

    #[test]
    fn gamma0_two() {
        let cs = CosetStructure::new(SubgroupKind::Gamma0(2)).unwrap();
        assert_eq!(cs.index(), 3);
        let fixed = (0..3).filter(|&i| cs.perm_t[i] == i).count();
        assert_eq!(fixed, 1);
        let rep = coset_perm_rep(&cs).unwrap();
        assert!(rep.validate().pass);
        assert!(CosetStructure::new(SubgroupKind::Full).unwrap().index() == 1);
        assert!(coset_perm_rep(&CosetStructure::new(SubgroupKind::Full).unwrap()).unwrap().is_trivial());
    }

    #[test]
    fn gamma_two_is_regular() {
        let rep = builtin_rep("gamma:2").unwrap();
        assert_eq!(rep.dim(), 6);
        let g = QuotientGroup::psl2(2);
        assert_eq!(g.order(), 6);
        let chi = g.character(&rep);
        assert!((chi[0] - 6.0).norm() < 1e-15);
        assert!(chi[1..].iter().all(|x| x.norm() < 1e-15));
    }

    #[test]
    fn s3_projectors() {
        let g = QuotientGroup::psl2(2);
        let reg = g.regular_action();
        let ps: Vec<CMat> = s3_irreps()
            .iter()
            .map(|r| isotypic_projector(&reg, &g.character(r), r.dim(), g.order()).unwrap())
            .collect();
        let avg = CMat::from_element(6, 6, c(1.0 / 6.0));
        assert!(max_norm(&(&ps[0] - avg)) < 1e-15);
        let total = ps.iter().fold(CMat::zeros(6, 6), |a, p| a + p);
        assert!(identity_defect(&total) < 1e-12);
        for (a, pa) in ps.iter().enumerate() {
            assert!(max_norm(&(pa * pa - pa)) < 1e-12);
            for (b, pb) in ps.iter().enumerate() {
                if a != b {
                    assert!(max_norm(&(pa * pb)) < 1e-12);
                }
            }
        }
        assert!(isotypic_projector(&reg, &[c(1.0)], 1, 6).is_err());
    }

    #[test]
    fn invariants() {
        let reg = builtin_rep("gamma:2").unwrap();
        let g = QuotientGroup::psl2(2);
        assert_eq!(invariant_subspace_dim(&reg, &g.words), 1);
        let s: GroupWord = "S".parse().unwrap();
        assert_eq!(invariant_subspace_dim(&reg, std::slice::from_ref(&s)), 3);
        assert_eq!(invariant_subspace_dim(&FiniteRep::trivial(), &[s]), 1);
    }

    #[test]
    fn rep_file_round_trip() {
        for name in ["trivial", "s3-std", "gamma0:2", "gamma:3"] {
            let rep = builtin_rep(name).unwrap();
            let text = write_rep(&rep);
            let back = parse_rep(&text).unwrap();
            assert_eq!(back, rep, "{name}");
        }
        assert_eq!(parse_complex("-0.5-1.5e-3j").unwrap(), C64::new(-0.5, -1.5e-3));
        assert_eq!(parse_complex("1e-5+2E+3j").unwrap(), C64::new(1e-5, 2e3));
        assert!(parse_rep("dim = 1\n1+0j\n").is_err());
        assert!(matches!(parse_rep("dim = 1\nN = 2\n1+0j\n1+0j\n"), Err(Error::InvalidRep(_))));
        assert!(matches!(parse_rep("dim = 1\nN = 1\n1+0j\nx\n"), Err(Error::Parse { line: 4, .. })));
    }

    fn gen_strategy() -> impl Strategy<Value = Gen> {
        prop_oneof![Just(Gen::S), Just(Gen::T), Just(Gen::TInv), Just(Gen::TP), Just(Gen::TPInv)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn word_homomorphism(a in prop::collection::vec(gen_strategy(), 0..=12),
                             b in prop::collection::vec(gen_strategy(), 0..=12)) {
            let wa = GroupWord::new(a);
            let wb = GroupWord::new(b);
            for rep in [s3_irreps()[2].clone(), builtin_rep("gamma0:5").unwrap()] {
                let lhs = rep.of_word(&wa.concat(&wb));
                let rhs = rep.of_word(&wa) * rep.of_word(&wb);
                prop_assert!(max_norm(&(lhs - rhs)) < 1e-12);
            }
            let m = wa.concat(&wb).int_matrix();
            prop_assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
        }

        #[test]
        fn coset_reps_validate(n in 1u32..=7, gamma in any::<bool>()) {
            let kind = if gamma { SubgroupKind::Gamma(n) } else { SubgroupKind::Gamma0(n) };
            let rep = coset_perm_rep(&CosetStructure::new(kind).unwrap()).unwrap();
            let r = rep.validate();
            prop_assert!(r.pass);
        }
    }
}
