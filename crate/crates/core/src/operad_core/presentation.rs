use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;

use super::operad::{normalize, Component, GradedOperadTruncation, SparseVec};
use super::tree::{reduced_shapes, Tree};
use crate::error::{Error, Result};
use crate::linalg::{rank_torsion, IntMatrix};
use crate::perm::Perm;

/// How `Σ_k` acts on a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// `w·g = g`.
    Trivial,
    /// `w·g = sgn(w) g`.
    Sign,
    /// The regular representation: `g` spans a free `Σ_k`-orbit.
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub arity: usize,
    pub degree: i64,
    pub symmetry: Symmetry,
}

/// Basis of the generating `Σ_*`-object in one arity.
#[derive(Clone, Debug, Default)]
struct Labels {
    /// `(generator, permutation)`; the permutation is the identity unless
    /// the generator is free.
    entries: Vec<(usize, Perm)>,
    index: HashMap<(usize, Perm), u32>,
}

/// An operad given by generators and relations.
#[derive(Clone, Debug)]
pub struct Presentation {
    generators: Vec<Generator>,
    labels: Vec<Labels>,
    relations: Vec<FreeElement>,
}

/// An element of the free operad: canonical trees with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreeElement {
    pub arity: usize,
    pub terms: BTreeMap<Tree, i64>,
}

impl FreeElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, t: Tree, c: i64) {
        if c == 0 {
            return;
        }
        let v = self.terms.entry(t.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.terms.remove(&t);
        }
    }
}

impl Presentation {
    pub fn new(generators: Vec<Generator>) -> Result<Presentation> {
        let max = generators.iter().map(|g| g.arity).max().unwrap_or(0);
        let mut labels = vec![Labels::default(); max + 1];
        for (k, g) in generators.iter().enumerate() {
            if g.arity < 2 {
                return Err(Error::Invalid(format!("generator {} has arity {} < 2", g.name, g.arity)));
            }
            let perms = if g.symmetry == Symmetry::Free { Perm::all(g.arity) } else { vec![Perm::identity(g.arity)] };
            for p in perms {
                let l = &mut labels[g.arity];
                l.index.insert((k, p.clone()), l.entries.len() as u32);
                l.entries.push((k, p));
            }
        }
        Ok(Presentation { generators, labels, relations: Vec::new() })
    }

    /// The associative operad: one binary generator with free `Σ_2` action.
    pub fn associative() -> Presentation {
        Presentation::parse("gen mu 2 0 sym=free\nrel mu(mu(1,2),3) - mu(1,mu(2,3))\n").expect("valid presentation")
    }

    /// The Gerstenhaber operad `G_n`, `n >= 1`.
    pub fn gerstenhaber(n: usize) -> Presentation {
        let sym = if n % 2 == 0 { "+1" } else { "-1" };
        let text = format!(
            "gen mu 2 0 sym=+1\n\
             gen lambda 2 {} sym={}\n\
             rel mu(mu(1,2),3) - mu(1,mu(2,3))\n\
             rel lambda(lambda(1,2),3) + lambda(lambda(2,3),1) + lambda(lambda(3,1),2)\n\
             rel lambda(mu(1,2),3) - mu(lambda(1,3),2) - mu(1,lambda(2,3))\n",
            n as i64 - 1,
            sym
        );
        Presentation::parse(&text).expect("valid presentation")
    }

    /// Parses `gen name arity degree sym=<+1|-1|sgn|free>` and
    /// `rel <expression>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Presentation> {
        let mut gens = Vec::new();
        let mut rels = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match head {
                "gen" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() < 3 {
                        return Err(Error::Parse(format!("generator line {:?}", line)));
                    }
                    let arity = parts[1].parse().map_err(|_| Error::Parse(format!("arity in {:?}", line)))?;
                    let degree = parts[2].parse().map_err(|_| Error::Parse(format!("degree in {:?}", line)))?;
                    let symmetry = match parts.get(3).copied().unwrap_or("sym=free") {
                        "sym=+1" | "sym=1" => Symmetry::Trivial,
                        "sym=-1" | "sym=sgn" | "sym=char" => Symmetry::Sign,
                        "sym=free" => Symmetry::Free,
                        other => return Err(Error::Parse(format!("unknown symmetry {:?}", other))),
                    };
                    gens.push(Generator { name: parts[0].to_string(), arity, degree, symmetry });
                }
                "rel" => rels.push(rest.to_string()),
                _ => rels.push(line.to_string()),
            }
        }
        let mut p = Presentation::new(gens)?;
        for r in rels {
            let e = p.parse_element(&r)?;
            p.add_relation(e)?;
        }
        Ok(p)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[FreeElement] {
        &self.relations
    }

    pub fn add_relation(&mut self, rel: FreeElement) -> Result<()> {
        let degrees: Vec<i64> = rel.terms.keys().map(|t| self.tree_degree(t)).collect();
        if degrees.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Invalid("relation is not homogeneous in degree".into()));
        }
        self.relations.push(rel);
        Ok(())
    }

    fn label_degree(&self, arity: usize, label: u32) -> i64 {
        self.generators[self.labels[arity].entries[label as usize].0].degree
    }

    pub fn tree_degree(&self, t: &Tree) -> i64 {
        t.total_degree(&|k, l| self.label_degree(k, l))
    }

    fn act_label(&self, arity: usize, label: u32, w: &Perm) -> Vec<(u32, i64)> {
        let (g, p) = &self.labels[arity].entries[label as usize];
        match self.generators[*g].symmetry {
            Symmetry::Trivial => vec![(label, 1)],
            Symmetry::Sign => vec![(label, w.sign())],
            Symmetry::Free => vec![(self.labels[arity].index[&(*g, w.compose(p))], 1)],
        }
    }

    /// Canonical form of a tree labeled by generator basis indices.
    pub fn canonicalize(&self, t: &Tree) -> Vec<(Tree, i64)> {
        t.canonicalize(&|k, l| self.label_degree(k, l), &|k, l, w| self.act_label(k, l, w))
    }

    pub fn label_name(&self, arity: usize, label: u32) -> String {
        let (g, p) = &self.labels[arity].entries[label as usize];
        let name = &self.generators[*g].name;
        if p.is_identity() {
            name.clone()
        } else {
            format!("{}.{}", name, p)
        }
    }

    pub fn render(&self, t: &Tree) -> String {
        t.render(&|k, l| self.label_name(k, l))
    }

    /// Parses a linear combination such as `mu(mu(1,2),3) - 2*mu(1,mu(2,3))`.
    pub fn parse_element(&self, text: &str) -> Result<FreeElement> {
        let mut p = ExprParser { s: text.as_bytes(), i: 0, pres: self };
        let mut out = FreeElement::default();
        let mut first = true;
        loop {
            p.skip_ws();
            if p.i >= p.s.len() {
                break;
            }
            let mut sign = 1;
            match p.peek() {
                Some(b'+') => {
                    p.i += 1;
                }
                Some(b'-') => {
                    sign = -1;
                    p.i += 1;
                }
                _ if !first => return Err(Error::Parse(format!("expected + or - in {:?}", text))),
                _ => {}
            }
            p.skip_ws();
            let mut coeff = 1;
            if p.peek().is_some_and(|c| c.is_ascii_digit()) {
                let save = p.i;
                let n = p.number()?;
                p.skip_ws();
                if p.peek() == Some(b'*') {
                    p.i += 1;
                    coeff = n as i64;
                } else {
                    p.i = save;
                }
            }
            let tree = p.tree()?;
            let r = tree.arity();
            let mut leaves = tree.leaves();
            leaves.sort_unstable();
            if leaves != (1..=r as u8).collect::<Vec<_>>() {
                return Err(Error::Parse(format!("leaves of {:?} are not 1..{}", text, r)));
            }
            if !tree.is_reduced() {
                return Err(Error::Parse(format!("non-reduced tree in {:?}", text)));
            }
            if !out.is_zero() && out.arity != r {
                return Err(Error::Parse(format!("mixed arities in {:?}", text)));
            }
            out.arity = r;
            for (t, c) in self.canonicalize(&tree) {
                out.add_term(t, c * coeff * sign);
            }
            first = false;
        }
        if out.arity == 0 {
            return Err(Error::Parse(format!("empty expression {:?}", text)));
        }
        Ok(out)
    }

    /// Basis of the free operad in arity `r` and weight `m` (vertex count):
    /// canonical reduced trees with generator labels. Weight 0 is the unit.
    pub fn free_component(&self, r: usize, m: usize) -> Vec<Tree> {
        if m == 0 {
            return if r == 1 { vec![Tree::Leaf(1)] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for shape in reduced_shapes(r, m) {
            let arities: Vec<usize> = shape.vertices().iter().map(|v| v.0).collect();
            if arities.iter().any(|&k| self.labels.get(k).is_none_or(|l| l.entries.is_empty())) {
                continue;
            }
            let mut choice = vec![0u32; arities.len()];
            loop {
                out.push(assign_labels(&shape, &choice, &mut 0));
                let mut k = choice.len();
                let mut done = true;
                while k > 0 {
                    k -= 1;
                    choice[k] += 1;
                    if (choice[k] as usize) < self.labels[arities[k]].entries.len() {
                        done = false;
                        break;
                    }
                    choice[k] = 0;
                }
                if done {
                    break;
                }
            }
        }
        out.sort();
        out
    }

    /// All weights of the free operad in arity `r`.
    pub fn free_basis(&self, r: usize) -> Vec<Tree> {
        let mut out: Vec<Tree> = (1..r.max(2)).flat_map(|m| self.free_component(r, m)).collect();
        if r == 1 {
            out = vec![Tree::Leaf(1)];
        }
        out.sort();
        out
    }

    /// Canonical form of `a ∘_e b` in the free operad with the Koszul sign
    /// of moving the vertices of `b` into preorder position.
    pub fn graft(&self, a: &Tree, e: usize, b: &Tree) -> Result<Vec<(Tree, i64)>> {
        let g = a.graft(e, b)?;
        let deg = |k: usize, l: u32| self.label_degree(k, l);
        let after = degree_after_leaf(a, e as u8, &deg);
        let sign = if (after * b.total_degree(&deg)).rem_euclid(2) == 1 { -1 } else { 1 };
        Ok(self.canonicalize(&g).into_iter().map(|(t, c)| (t, c * sign)).collect())
    }

    /// Quotient of the free operad by the ideal generated by the relations,
    /// in arities `1..=max_arity`.
    pub fn quotient(&self, max_arity: usize) -> Result<PresentedOperad> {
        let mut arities: Vec<QuotientComponent> = vec![QuotientComponent::default()];
        for r in 1..=max_arity {
            let basis = self.free_basis(r);
            let index: HashMap<Tree, usize> = basis.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
            let mut rows: Vec<SparseVec> = Vec::new();
            let to_vec = |terms: &[(Tree, i64)]| -> SparseVec {
                normalize(terms.iter().map(|(t, c)| (index[t] as u32, *c)).collect())
            };
            for rel in self.relations.iter().filter(|x| x.arity == r) {
                let terms: Vec<(Tree, i64)> = rel.terms.iter().map(|(t, c)| (t.clone(), *c)).collect();
                rows.push(to_vec(&terms));
            }
            // compositions of lower ideal elements with generators on both sides
            for s in 2..r {
                let lower = &arities[s];
                let t = r + 1 - s;
                let gens: Vec<Tree> = self.free_component(t, 1);
                for x in &lower.ideal_rows {
                    for g in &gens {
                        for e in 1..=s {
                            rows.push(to_vec(&self.graft_combination(&lower.free_basis, x, e, g, false)?));
                        }
                        for e in 1..=t {
                            rows.push(to_vec(&self.graft_combination(&lower.free_basis, x, e, g, true)?));
                        }
                    }
                }
            }
            // Σ_r orbits
            let seeds = rows.clone();
            for w in Perm::all(r).into_iter().skip(1) {
                for x in &seeds {
                    let mut terms = Vec::new();
                    for &(k, c) in x {
                        for (t, d) in self.canonicalize(&basis[k as usize].relabel(&w)) {
                            terms.push((t, c * d));
                        }
                    }
                    rows.push(to_vec(&terms));
                }
            }
            arities.push(QuotientComponent::build(r, basis, rows)?);
        }
        Ok(PresentedOperad { presentation: self.clone(), arities })
    }

    /// `x ∘_e g` (or `g ∘_e x` when `outer`) for `x` a vector on `basis`.
    fn graft_combination(&self, basis: &[Tree], x: &SparseVec, e: usize, g: &Tree, outer: bool) -> Result<Vec<(Tree, i64)>> {
        let mut out = Vec::new();
        for &(k, c) in x {
            let t = &basis[k as usize];
            let terms = if outer { self.graft(g, e, t)? } else { self.graft(t, e, g)? };
            out.extend(terms.into_iter().map(|(t, d)| (t, c * d)));
        }
        Ok(out)
    }
}

/// Sum of vertex degrees after leaf `e` in preorder.
fn degree_after_leaf(t: &Tree, e: u8, degree: &impl Fn(usize, u32) -> i64) -> i64 {
    fn walk(t: &Tree, e: u8, seen: &mut bool, acc: &mut i64, degree: &impl Fn(usize, u32) -> i64) {
        match t {
            Tree::Leaf(l) => {
                if *l == e {
                    *seen = true;
                }
            }
            Tree::Node { label, children } => {
                if *seen {
                    *acc += degree(children.len(), *label);
                }
                for c in children {
                    walk(c, e, seen, acc, degree);
                }
            }
        }
    }
    let mut seen = false;
    let mut acc = 0;
    walk(t, e, &mut seen, &mut acc, degree);
    acc
}

fn assign_labels(shape: &Tree, choice: &[u32], next: &mut usize) -> Tree {
    match shape {
        Tree::Leaf(l) => Tree::Leaf(*l),
        Tree::Node { children, .. } => {
            let label = choice[*next];
            *next += 1;
            Tree::Node { label, children: children.iter().map(|c| assign_labels(c, choice, next)).collect() }
        }
    }
}

struct ExprParser<'a> {
    s: &'a [u8],
    i: usize,
    pres: &'a Presentation,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.i += 1;
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse(format!("expected a number at offset {}", start)))
    }

    fn tree(&mut self) -> Result<Tree> {
        self.skip_ws();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n = self.number()?;
            return u8::try_from(n).map(Tree::Leaf).map_err(|_| Error::Parse(format!("leaf {} too large", n)));
        }
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.i += 1;
        }
        let name = std::str::from_utf8(&self.s[start..self.i]).unwrap().to_string();
        if name.is_empty() {
            return Err(Error::Parse(format!("expected a generator at offset {}", start)));
        }
        self.skip_ws();
        if self.peek() != Some(b'(') {
            return Err(Error::Parse(format!("expected '(' after {}", name)));
        }
        self.i += 1;
        let mut children = Vec::new();
        loop {
            children.push(self.tree()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.i += 1,
                Some(b')') => {
                    self.i += 1;
                    break;
                }
                _ => return Err(Error::Parse(format!("expected ',' or ')' at offset {}", self.i))),
            }
        }
        let k = children.len();
        let g = self
            .pres
            .generators
            .iter()
            .position(|g| g.name == name && g.arity == k)
            .ok_or_else(|| Error::Parse(format!("no generator {} of arity {}", name, k)))?;
        let label = self.pres.labels[k].index[&(g, Perm::identity(k))];
        Ok(Tree::Node { label, children })
    }
}

/// One arity of a presented operad: the free component, the ideal and a
/// normal basis of the quotient.
#[derive(Clone, Debug, Default)]
pub struct QuotientComponent {
    pub arity: usize,
    pub free_basis: Vec<Tree>,
    /// Reduced echelon rows spanning the ideal.
    pub ideal_rows: Vec<SparseVec>,
    /// `(pivot column, row)` of the echelon form.
    pivots: Vec<(usize, usize)>,
    /// Indices of free basis trees forming a basis of the quotient.
    pub normal: Vec<usize>,
    normal_index: HashMap<usize, usize>,
    /// Invariant factors `> 1` of the ideal: the torsion of the quotient.
    pub torsion: Vec<BigInt>,
}

impl QuotientComponent {
    fn build(r: usize, free_basis: Vec<Tree>, rows: Vec<SparseVec>) -> Result<QuotientComponent> {
        let n = free_basis.len();
        let torsion = if rows.is_empty() {
            Vec::new()
        } else {
            let m = IntMatrix::from_i64_rows(
                rows.len(),
                n,
                rows.iter().map(|row| row.iter().map(|&(c, v)| (c as usize, v)).collect()).collect(),
            );
            rank_torsion(&m).torsion
        };
        // Gauss-Jordan with unit pivots, taking the largest trees as leading terms
        let mut dense: Vec<Vec<i64>> = rows
            .iter()
            .map(|row| {
                let mut v = vec![0i64; n];
                for &(c, x) in row {
                    v[c as usize] += x;
                }
                v
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut used = vec![false; dense.len()];
        for col in (0..n).rev() {
            let Some(p) = (0..dense.len()).find(|&i| !used[i] && dense[i][col].abs() == 1) else { continue };
            used[p] = true;
            if dense[p][col] < 0 {
                dense[p].iter_mut().for_each(|x| *x = -*x);
            }
            let prow = dense[p].clone();
            for (i, row) in dense.iter_mut().enumerate() {
                if i != p && row[col] != 0 {
                    let f = row[col];
                    for (x, y) in row.iter_mut().zip(&prow) {
                        *x -= f * y;
                    }
                }
            }
            pivots.push((col, p));
        }
        if dense.iter().enumerate().any(|(i, row)| !used[i] && row.iter().any(|&x| x != 0)) {
            if torsion.is_empty() {
                return Err(Error::Unsolvable(format!(
                    "the ideal in arity {} has no unimodular echelon form for the chosen order",
                    r
                )));
            }
            // torsion is reported by the caller; keep the unit-pivot part
        }
        let mut ideal_rows = Vec::with_capacity(pivots.len());
        let mut pivot_rows = Vec::with_capacity(pivots.len());
        for (k, &(col, p)) in pivots.iter().enumerate() {
            ideal_rows.push(dense[p].iter().enumerate().filter(|(_, &x)| x != 0).map(|(c, &x)| (c as u32, x)).collect());
            pivot_rows.push((col, k));
        }
        let pivot_cols: std::collections::HashSet<usize> = pivots.iter().map(|p| p.0).collect();
        let normal: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        let normal_index = normal.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        Ok(QuotientComponent { arity: r, free_basis, ideal_rows, pivots: pivot_rows, normal, normal_index, torsion })
    }

    pub fn rank(&self) -> usize {
        self.normal.len()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Coordinates of a free-operad vector in the normal basis.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut dense: HashMap<usize, i64> = v.iter().map(|&(c, x)| (c as usize, x)).collect();
        for &(col, k) in &self.pivots {
            let f = dense.get(&col).copied().unwrap_or(0);
            if f != 0 {
                for &(c, x) in &self.ideal_rows[k] {
                    *dense.entry(c as usize).or_insert(0) -= f * x;
                }
            }
        }
        normalize(
            dense
                .into_iter()
                .filter(|&(_, x)| x != 0)
                .map(|(c, x)| (*self.normal_index.get(&c).expect("pivot columns are eliminated") as u32, x))
                .collect(),
        )
    }
}

/// The arity-truncated quotient of a presentation.
#[derive(Clone, Debug)]
pub struct PresentedOperad {
    pub presentation: Presentation,
    arities: Vec<QuotientComponent>,
}

impl PresentedOperad {
    pub fn max_arity(&self) -> usize {
        self.arities.len() - 1
    }

    pub fn component(&self, r: usize) -> &QuotientComponent {
        &self.arities[r]
    }

    /// Ranks of the quotient by degree in arity `r`.
    pub fn graded_ranks(&self, r: usize) -> BTreeMap<i64, usize> {
        let c = &self.arities[r];
        let mut out = BTreeMap::new();
        for &k in &c.normal {
            *out.entry(self.presentation.tree_degree(&c.free_basis[k])).or_insert(0) += 1;
        }
        out
    }

    pub fn is_torsion_free(&self) -> bool {
        self.arities.iter().all(|c| c.torsion.is_empty())
    }

    fn coordinates(&self, r: usize, terms: &[(Tree, i64)]) -> SparseVec {
        let c = &self.arities[r];
        let v = normalize(
            terms
                .iter()
                .map(|(t, x)| (c.free_basis.binary_search(t).expect("canonical tree in the free basis") as u32, *x))
                .collect(),
        );
        c.reduce(&v)
    }

    /// Structure tables on the normal bases.
    pub fn truncation(&self) -> Result<GradedOperadTruncation> {
        let pres = &self.presentation;
        let max = self.max_arity();
        let mut components = vec![Component::default()];
        for r in 1..=max {
            let c = &self.arities[r];
            let trees: Vec<&Tree> = c.normal.iter().map(|&k| &c.free_basis[k]).collect();
            let action = Perm::all(r)
                .iter()
                .map(|w| trees.iter().map(|t| self.coordinates(r, &pres.canonicalize(&t.relabel(w)))).collect())
                .collect();
            components.push(Component {
                degrees: trees.iter().map(|t| pres.tree_degree(t)).collect(),
                labels: trees.iter().map(|t| if r == 1 { "1".to_string() } else { pres.render(t) }).collect(),
                differential: vec![Vec::new(); trees.len()],
                action,
            });
        }
        let mut compositions = HashMap::new();
        for s in 2..=max {
            for t in 2..=max + 1 - s {
                let (ca, cb) = (&self.arities[s], &self.arities[t]);
                for e in 1..=s {
                    let mut table = Vec::with_capacity(ca.rank() * cb.rank());
                    for &a in &ca.normal {
                        for &b in &cb.normal {
                            let terms = pres.graft(&ca.free_basis[a], e, &cb.free_basis[b])?;
                            table.push(self.coordinates(s + t - 1, &terms));
                        }
                    }
                    compositions.insert((s, e, t), table);
                }
            }
        }
        GradedOperadTruncation::new(max, components, compositions)
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (t, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{:+}*{}", c, t)?;
        }
        Ok(())
    }
}
