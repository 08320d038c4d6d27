//! Exhaustive enumeration of Rota-Baxter operators over small prime fields,
//! fingerprint classification and orbit reduction.
//!
//! The hot loop works on `u8` residues in a column-major `[u8; 64]` layout
//! (entry `8*j + i` is the coefficient of `e_i` in `R(e_j)`); the exact
//! [`LinMap`] code is used only at the edges and in tests as the oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use log::info;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{sign_table, Octo, SubalgebraSpec, BASIS_NAMES, DIM};
use crate::catalog::{self, CaseSpec, Source};
use crate::maps::{build_map, MapKind, MapSpec};
use crate::operator::{Fingerprint, LinMap};
use crate::scalar::{FieldSpec, Prime, Scalar};

/// Default cap on the number of candidates a sweep may visit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Default cap on the number of scale-normalized operators explored while
/// closing one orbit.
pub const DEFAULT_ORBIT_CAP: usize = 5_000_000;

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("{candidates} candidates exceed the budget of {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },
    #[error("exhaustive search needs a prime field with p < 256, got {0}")]
    UnsupportedField(FieldSpec),
    #[error("vector {0} is not over the search field")]
    FieldMismatch(String),
    #[error("orbit grew past {cap} operators")]
    OrbitBudgetExceeded { cap: usize },
    #[error("operator is not over F{0}")]
    OperatorField(u16),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("could not build worker pool: {0}")]
    ThreadPool(String),
}

/// An operator over `F_p` in the compact column-major layout.
pub type FpMatrix = [u8; 64];

fn small_prime(field: FieldSpec) -> Result<u8, SearchError> {
    match field {
        FieldSpec::Prime(p) if p.get() < 256 => Ok(p.get() as u8),
        _ => Err(SearchError::UnsupportedField(field)),
    }
}

fn octo_to_fp(x: &Octo, field: FieldSpec) -> Result<[u8; DIM], SearchError> {
    if x.field() != field {
        return Err(SearchError::FieldMismatch(x.to_string()));
    }
    let mut v = [0u8; DIM];
    for (i, c) in x.coords().iter().enumerate() {
        v[i] = c.residue().expect("prime field") as u8;
    }
    Ok(v)
}

pub fn linmap_to_fp(r: &LinMap) -> Result<FpMatrix, SearchError> {
    small_prime(r.field())?;
    let mut m = [0u8; 64];
    for (k, s) in r.entries_column_major().enumerate() {
        m[k] = s.residue().expect("prime field") as u8;
    }
    Ok(m)
}

pub fn fp_to_linmap(m: &FpMatrix, field: FieldSpec) -> LinMap {
    let cols = (0..DIM)
        .map(|j| {
            let coords = (0..DIM)
                .map(|i| Scalar::from_int(field, m[8 * j + i] as i64))
                .collect();
            Octo::from_coords(field, coords).expect("coordinates in field")
        })
        .collect();
    LinMap::from_columns(field, cols).expect("eight columns")
}

/// Compact text form: eight columns separated by `|`, entries by `,`.
pub fn fp_to_string(m: &FpMatrix) -> String {
    m.chunks(8)
        .map(|c| c.iter().map(u8::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("|")
}

// ---------------------------------------------------------------------------
// Mod-p kernels

/// Flattened product table: `PROD[8a+b] = (k, sign)` with `k = 255` for zero.
fn prod_table() -> [(u8, i8); 64] {
    let t = sign_table();
    let mut out = [(255u8, 0i8); 64];
    for a in 0..DIM {
        for b in 0..DIM {
            if let Some((k, s)) = t[a][b] {
                out[8 * a + b] = (k as u8, s);
            }
        }
    }
    out
}

#[derive(Clone)]
struct Kernel {
    p: i32,
    prod: [(u8, i8); 64],
}

impl Kernel {
    fn new(p: u8) -> Self {
        Kernel {
            p: p as i32,
            prod: prod_table(),
        }
    }

    fn mul(&self, x: &[u8; DIM], y: &[u8; DIM]) -> [u8; DIM] {
        let mut acc = [0i32; DIM];
        for a in 0..DIM {
            if x[a] == 0 {
                continue;
            }
            for b in 0..DIM {
                if y[b] == 0 {
                    continue;
                }
                let (k, s) = self.prod[8 * a + b];
                if k != 255 {
                    acc[k as usize] += s as i32 * x[a] as i32 * y[b] as i32;
                }
            }
        }
        acc.map(|v| v.rem_euclid(self.p) as u8)
    }

    /// The weight-zero identity on all basis pairs; stops at the first failure.
    /// Pair order is irrelevant for the yes/no answer.
    fn is_rb(&self, cols: &[[u8; DIM]; DIM]) -> bool {
        let p = self.p;
        let mut nz: [[u8; DIM]; DIM] = [[0; DIM]; DIM];
        let mut nlen = [0usize; DIM];
        for j in 0..DIM {
            for a in 0..DIM {
                if cols[j][a] != 0 {
                    nz[j][nlen[j]] = a as u8;
                    nlen[j] += 1;
                }
            }
        }
        for i in 0..DIM {
            for j in 0..DIM {
                if nlen[i] == 0 && nlen[j] == 0 {
                    continue;
                }
                let (u, w) = (&cols[i], &cols[j]);
                let mut lhs = [0i32; DIM];
                let mut z = [0i32; DIM];
                for &a in &nz[i][..nlen[i]] {
                    let a = a as usize;
                    let ua = u[a] as i32;
                    for &b in &nz[j][..nlen[j]] {
                        let b = b as usize;
                        let (k, s) = self.prod[8 * a + b];
                        if k != 255 {
                            lhs[k as usize] += s as i32 * ua * w[b] as i32;
                        }
                    }
                    let (k, s) = self.prod[8 * a + j];
                    if k != 255 {
                        z[k as usize] += s as i32 * ua;
                    }
                }
                for &b in &nz[j][..nlen[j]] {
                    let b = b as usize;
                    let (k, s) = self.prod[8 * i + b];
                    if k != 255 {
                        z[k as usize] += s as i32 * w[b] as i32;
                    }
                }
                let mut rhs = [0i32; DIM];
                for c in 0..DIM {
                    let zc = z[c].rem_euclid(p);
                    if zc != 0 {
                        for &r in &nz[c][..nlen[c]] {
                            rhs[r as usize] += zc * cols[c][r as usize] as i32;
                        }
                    }
                }
                for k in 0..DIM {
                    if (lhs[k] - rhs[k]).rem_euclid(p) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn inv_mod(a: u8, p: u8) -> u8 {
    (1..p).find(|&b| (a as u32 * b as u32) % p as u32 == 1).expect("nonzero residue")
}

/// Row echelon form over F_p; returns the nonzero rows (reduced).
fn fp_rref(mut rows: Vec<[u8; DIM]>, p: u8) -> Vec<[u8; DIM]> {
    let pm = p as u32;
    let mut r = 0;
    for c in 0..DIM {
        let Some(f) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, f);
        let inv = inv_mod(rows[r][c], p) as u32;
        for x in rows[r].iter_mut() {
            *x = ((*x as u32 * inv) % pm) as u8;
        }
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c] as u32;
                for k in 0..DIM {
                    row[k] = ((row[k] as u32 + pm * pm - f * pivot[k] as u32) % pm) as u8;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

fn fp_rank(rows: Vec<[u8; DIM]>, p: u8) -> usize {
    fp_rref(rows, p).len()
}

fn columns(m: &FpMatrix) -> [[u8; DIM]; DIM] {
    let mut c = [[0u8; DIM]; DIM];
    for j in 0..DIM {
        c[j].copy_from_slice(&m[8 * j..8 * j + 8]);
    }
    c
}

fn fp_compose(a: &FpMatrix, b: &FpMatrix, p: u8) -> FpMatrix {
    // (a ∘ b) column j = a(b e_j)
    let mut out = [0u8; 64];
    for j in 0..DIM {
        let mut acc = [0u32; DIM];
        for k in 0..DIM {
            let bk = b[8 * j + k] as u32;
            if bk != 0 {
                for i in 0..DIM {
                    acc[i] += bk * a[8 * k + i] as u32;
                }
            }
        }
        for i in 0..DIM {
            out[8 * j + i] = (acc[i] % p as u32) as u8;
        }
    }
    out
}

/// Fingerprint over F_p without leaving the compact representation.
/// Uses `dim(Im R ∩ Ker R) = rank R - rank R²`.
pub fn fp_fingerprint(m: &FpMatrix, p: u8) -> Fingerprint {
    let k = Kernel::new(p);
    let r2 = fp_compose(m, m, p);
    let r3 = fp_compose(&r2, m, p);
    let img = fp_rref(columns(m).to_vec(), p);
    let d1 = img.len();
    let d2 = fp_rank(columns(&r2).to_vec(), p);
    let d3 = fp_rank(columns(&r3).to_vec(), p);
    let products: Vec<[u8; DIM]> = img
        .iter()
        .flat_map(|a| img.iter().map(|b| k.mul(a, b)))
        .collect();
    let mut with_one = img.clone();
    with_one.push([1, 0, 0, 1, 0, 0, 0, 0]);
    Fingerprint {
        d1,
        d2,
        d3,
        k: d1 - d2,
        img_square: fp_rank(products, p),
        img_unital: fp_rank(with_one, p) == d1,
    }
}

/// Mod-p Rota-Baxter check (fast path).
pub fn fp_is_rb(m: &FpMatrix, p: u8) -> bool {
    Kernel::new(p).is_rb(&columns(m))
}

// ---------------------------------------------------------------------------
// Search specification

/// The subspace the image must lie in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageTarget {
    pub name: String,
    pub basis: Vec<Octo>,
}

impl ImageTarget {
    pub fn subalgebra(s: SubalgebraSpec, field: FieldSpec) -> Self {
        ImageTarget {
            name: s.name().to_string(),
            basis: s.basis(field),
        }
    }

    pub fn zero() -> Self {
        ImageTarget {
            name: "0".into(),
            basis: vec![],
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub field: FieldSpec,
    pub image: ImageTarget,
    pub kernel_contains: Vec<Octo>,
    pub require_image_exact: bool,
    pub budget: u64,
    /// Worker threads; `None` lets rayon decide.
    pub threads: Option<usize>,
}

impl SearchSpec {
    pub fn new(field: FieldSpec, image: ImageTarget) -> Self {
        SearchSpec {
            field,
            image,
            kernel_contains: vec![],
            require_image_exact: false,
            budget: DEFAULT_BUDGET,
            threads: None,
        }
    }

    pub fn with_kernel(mut self, k: Vec<Octo>) -> Self {
        self.kernel_contains = k;
        self
    }

    pub fn exact(mut self, yes: bool) -> Self {
        self.require_image_exact = yes;
        self
    }

    pub fn with_budget(mut self, b: u64) -> Self {
        self.budget = b;
        self
    }
}

/// Precomputed search plan: which columns are free and how the rest follow.
struct Plan {
    p: u8,
    image: Vec<[u8; DIM]>,
    free: Vec<usize>,
    /// `(pivot column, [(free column, coefficient)])`: R(e_pivot) = -Σ c·R(e_free).
    bound: Vec<(usize, Vec<(usize, u8)>)>,
    digits: usize,
    total: u64,
}

impl Plan {
    fn new(spec: &SearchSpec) -> Result<Self, SearchError> {
        let p = small_prime(spec.field)?;
        let image_rows = spec
            .image
            .basis
            .iter()
            .map(|x| octo_to_fp(x, spec.field))
            .collect::<Result<Vec<_>, _>>()?;
        let image = fp_rref(image_rows, p);
        let kernel_rows = spec
            .kernel_contains
            .iter()
            .map(|x| octo_to_fp(x, spec.field))
            .collect::<Result<Vec<_>, _>>()?;
        let kernel = fp_rref(kernel_rows, p);
        let mut pivots = Vec::new();
        let mut bound = Vec::new();
        for row in &kernel {
            let pc = row.iter().position(|&x| x != 0).expect("nonzero row");
            pivots.push(pc);
            let deps: Vec<(usize, u8)> = (pc + 1..DIM)
                .filter(|&c| row[c] != 0)
                .map(|c| (c, row[c]))
                .collect();
            bound.push((pc, deps));
        }
        let free: Vec<usize> = (0..DIM).filter(|c| !pivots.contains(c)).collect();
        let digits = free.len() * image.len();
        let candidates = (p as u128).checked_pow(digits as u32).unwrap_or(u128::MAX);
        if candidates > spec.budget as u128 {
            return Err(SearchError::BudgetExceeded {
                candidates,
                budget: spec.budget,
            });
        }
        Ok(Plan {
            p,
            image,
            free,
            bound,
            digits,
            total: candidates as u64,
        })
    }

    /// Decode candidate number `n` into coefficient digits, most significant
    /// first. Digit order is (free column ascending, image basis vector ascending).
    fn decode(&self, mut n: u64, digits: &mut [u8]) {
        for d in digits.iter_mut().rev() {
            *d = (n % self.p as u64) as u8;
            n /= self.p as u64;
        }
    }

    fn build(&self, digits: &[u8], cols: &mut [[u8; DIM]; DIM]) {
        let p = self.p as u32;
        let d = self.image.len();
        *cols = [[0; DIM]; DIM];
        for (fi, &f) in self.free.iter().enumerate() {
            let mut acc = [0u32; DIM];
            for t in 0..d {
                let c = digits[fi * d + t] as u32;
                if c != 0 {
                    for i in 0..DIM {
                        acc[i] += c * self.image[t][i] as u32;
                    }
                }
            }
            for i in 0..DIM {
                cols[f][i] = (acc[i] % p) as u8;
            }
        }
        for (pc, deps) in &self.bound {
            let mut acc = [0u32; DIM];
            for &(c, k) in deps {
                for i in 0..DIM {
                    acc[i] += k as u32 * cols[c][i] as u32;
                }
            }
            for i in 0..DIM {
                cols[*pc][i] = ((p - acc[i] % p) % p) as u8;
            }
        }
    }
}

fn flatten(cols: &[[u8; DIM]; DIM]) -> FpMatrix {
    let mut m = [0u8; 64];
    for j in 0..DIM {
        m[8 * j..8 * j + 8].copy_from_slice(&cols[j]);
    }
    m
}

fn run_chunk(plan: &Plan, kernel: &Kernel, exact: bool, start: u64, end: u64) -> Vec<FpMatrix> {
    let mut digits = vec![0u8; plan.digits];
    plan.decode(start, &mut digits);
    let mut cols = [[0u8; DIM]; DIM];
    let mut out = Vec::new();
    let d = plan.image.len();
    for _ in start..end {
        plan.build(&digits, &mut cols);
        if kernel.is_rb(&cols) && (!exact || fp_rank(cols.to_vec(), plan.p) == d) {
            out.push(flatten(&cols));
        }
        // odometer increment, last digit fastest
        for x in digits.iter_mut().rev() {
            *x += 1;
            if *x == plan.p {
                *x = 0;
            } else {
                break;
            }
        }
    }
    out
}

/// Result of a sweep in the compact representation.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub candidates: u64,
    pub operators: Vec<FpMatrix>,
}

/// Enumerate in the compact representation. Output order is the candidate
/// order and does not depend on the number of threads.
pub fn sweep(spec: &SearchSpec) -> Result<SweepResult, SearchError> {
    let plan = Plan::new(spec)?;
    let kernel = Kernel::new(plan.p);
    let chunks: Vec<(u64, u64)> = (0..plan.total.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(plan.total)))
        .collect();
    let work = || -> Vec<FpMatrix> {
        chunks
            .par_iter()
            .map(|&(s, e)| run_chunk(&plan, &kernel, spec.require_image_exact, s, e))
            .collect::<Vec<_>>()
            .concat()
    };
    let operators = match spec.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| SearchError::ThreadPool(e.to_string()))?
            .install(work),
        None => work(),
    };
    info!(
        "swept {} candidates over F{} (image {}), {} Rota-Baxter",
        plan.total,
        plan.p,
        spec.image.name,
        operators.len()
    );
    Ok(SweepResult {
        candidates: plan.total,
        operators,
    })
}

/// All Rota-Baxter operators matching `spec`, as exact maps.
pub fn enumerate_rb(spec: &SearchSpec) -> Result<Vec<LinMap>, SearchError> {
    let res = sweep(spec)?;
    Ok(res
        .operators
        .iter()
        .map(|m| fp_to_linmap(m, spec.field))
        .collect())
}

// ---------------------------------------------------------------------------
// Orbits

#[derive(Clone)]
struct SparseMap {
    /// column j of φ: [(row, coef)]
    fwd: Vec<Vec<(usize, u32)>>,
    /// column j of φ⁻¹
    inv: Vec<Vec<(usize, u32)>>,
}

fn sparse_cols(m: &LinMap) -> Vec<Vec<(usize, u32)>> {
    (0..DIM)
        .map(|j| {
            (0..DIM)
                .filter_map(|i| {
                    let v = m.entry(i, j).residue().expect("prime field") as u32;
                    (v != 0).then_some((i, v))
                })
                .collect()
        })
        .collect()
}

/// The conjugation generators: every numbered map at every parameter value that
/// is not the identity, and the classical involution.
pub fn generator_specs(field: FieldSpec) -> Vec<MapSpec> {
    let elems = field.elements().expect("prime field");
    let mut out = Vec::new();
    for kind in MapKind::all() {
        if !kind.takes_param() {
            out.push(MapSpec::bare(kind));
            continue;
        }
        let neutral = kind.neutral_param(field);
        for a in &elems {
            if Some(a) == neutral.as_ref() || (kind.needs_nonzero() && a.is_zero()) {
                continue;
            }
            out.push(MapSpec {
                kind,
                param: Some(a.clone()),
            });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitInfo {
    pub id: usize,
    pub canonical: String,
    pub size: usize,
    pub fingerprint: Fingerprint,
}

/// Memoized orbits under conjugation by the generator maps and nonzero scaling.
pub struct OrbitStore {
    field: FieldSpec,
    p: u8,
    gens: Vec<SparseMap>,
    /// `reduce[n] = n mod p` for every sum the conjugation can produce.
    reduce: Vec<u8>,
    cap: usize,
    memo: FxHashMap<FpMatrix, usize>,
    orbits: Vec<(FpMatrix, usize)>,
}

impl OrbitStore {
    pub fn new(field: FieldSpec, cap: usize) -> Result<Self, SearchError> {
        let p = small_prime(field)?;
        let gens = generator_specs(field)
            .iter()
            .map(|spec| {
                let m = build_map(spec, field)
                    .map_err(|e| SearchError::Internal(format!("{spec}: {e}")))?;
                let inv = m
                    .inverse()
                    .map_err(|e| SearchError::Internal(format!("{spec}: {e}")))?;
                Ok(SparseMap {
                    fwd: sparse_cols(&m),
                    inv: sparse_cols(&inv),
                })
            })
            .collect::<Result<Vec<_>, SearchError>>()?;
        // Column sums have at most 8 terms, each below p^2.
        let bound = 8 * (p as usize) * (p as usize);
        let reduce = (0..bound).map(|n| (n % p as usize) as u8).collect();
        Ok(OrbitStore {
            field,
            p,
            gens,
            reduce,
            cap,
            memo: FxHashMap::default(),
            orbits: Vec::new(),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len() + (self.p as usize - 2)
    }

    fn conj(&self, g: &SparseMap, r: &FpMatrix) -> FpMatrix {
        let red = &self.reduce;
        // T = R ∘ φ⁻¹
        let mut t = [[0u32; DIM]; DIM];
        for j in 0..DIM {
            for &(k, c) in &g.inv[j] {
                for i in 0..DIM {
                    t[j][i] += c * r[8 * k + i] as u32;
                }
            }
        }
        // R' = φ ∘ T
        let mut out = [0u8; 64];
        for j in 0..DIM {
            let mut acc = [0u32; DIM];
            for i in 0..DIM {
                let tij = red[t[j][i] as usize] as u32;
                if tij != 0 {
                    for &(row, c) in &g.fwd[i] {
                        acc[row] += tij * c;
                    }
                }
            }
            for row in 0..DIM {
                out[8 * j + row] = red[acc[row] as usize];
            }
        }
        out
    }

    /// Scale so the first nonzero entry is 1. Scaling commutes with every
    /// conjugation, so the orbit is explored on these normalized matrices only;
    /// the least element of a scaling class is always its normalized one.
    fn normalize(&self, m: &FpMatrix) -> FpMatrix {
        match m.iter().find(|&&x| x != 0) {
            None | Some(1) => *m,
            Some(&lead) => {
                let l = inv_mod(lead, self.p) as usize;
                m.map(|x| self.reduce[x as usize * l])
            }
        }
    }

    /// Orbit id of an operator, closing its orbit if it has not been seen.
    pub fn orbit_id(&mut self, r: &FpMatrix) -> Result<usize, SearchError> {
        let start = self.normalize(r);
        if let Some(&id) = self.memo.get(&start) {
            return Ok(id);
        }
        let mut seen: FxHashSet<FpMatrix> = FxHashSet::default();
        let mut queue = vec![start];
        seen.insert(start);
        let mut best = start;
        while let Some(cur) = queue.pop() {
            if cur < best {
                best = cur;
            }
            for g in &self.gens {
                let next = self.normalize(&self.conj(g, &cur));
                if seen.insert(next) {
                    if seen.len() > self.cap {
                        return Err(SearchError::OrbitBudgetExceeded { cap: self.cap });
                    }
                    queue.push(next);
                }
            }
        }
        let id = self.orbits.len();
        let scalings = if best.iter().all(|&x| x == 0) { 1 } else { self.p as usize - 1 };
        self.orbits.push((best, seen.len() * scalings));
        self.memo.reserve(seen.len());
        for m in seen {
            self.memo.insert(m, id);
        }
        Ok(id)
    }

    /// Canonical representative: the least column-major encoding in the orbit.
    pub fn orbit_reduce(&mut self, r: &LinMap) -> Result<LinMap, SearchError> {
        if r.field() != self.field {
            return Err(SearchError::OperatorField(self.p as u16));
        }
        let id = self.orbit_id(&linmap_to_fp(r)?)?;
        Ok(fp_to_linmap(&self.orbits[id].0, self.field))
    }

    pub fn canonical(&self, id: usize) -> &FpMatrix {
        &self.orbits[id].0
    }

    pub fn orbit_size(&self, id: usize) -> usize {
        self.orbits[id].1
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }
}

// ---------------------------------------------------------------------------
// Classification report

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct FingerprintCount {
    pub fingerprint: Fingerprint,
    pub count: u64,
    pub in_catalog: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct OrbitEntry {
    pub canonical: String,
    pub orbit_size: usize,
    pub found: u64,
    pub fingerprint: Fingerprint,
    pub catalog_cases: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct OrbitSummary {
    pub orbit_count: usize,
    pub matched: Vec<OrbitEntry>,
    pub unmatched: Vec<OrbitEntry>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ClassifyReport {
    pub field: String,
    pub basis_order: Vec<String>,
    pub image: String,
    pub image_basis: Vec<String>,
    pub kernel_contains: Vec<String>,
    pub require_image_exact: bool,
    pub candidates: u64,
    pub rb_count: u64,
    pub nonzero_count: u64,
    pub fingerprints: Vec<FingerprintCount>,
    pub novel_fingerprints: Vec<Fingerprint>,
    pub orbits: Option<OrbitSummary>,
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Also reduce every found operator to its orbit and match orbits to the catalog.
    pub orbits: bool,
    pub orbit_cap: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            orbits: false,
            orbit_cap: DEFAULT_ORBIT_CAP,
        }
    }
}

/// Every admissible catalog instance over `field`, with its compact form.
fn catalog_instances(field: FieldSpec) -> Vec<(CaseSpec, FpMatrix)> {
    catalog::enumerate_all_admissible(field, &Source::all())
        .into_iter()
        .map(|(spec, r)| (spec, linmap_to_fp(&r).expect("prime field")))
        .collect()
}

/// Sweep, then group the nonzero operators by fingerprint and (optionally) orbit.
pub fn classify_run(spec: &SearchSpec, opts: ClassifyOptions) -> Result<ClassifyReport, SearchError> {
    let res = sweep(spec)?;
    let p = small_prime(spec.field)?;
    let nonzero: Vec<&FpMatrix> = res.operators.iter().filter(|m| m.iter().any(|&x| x != 0)).collect();

    let catalog = catalog_instances(spec.field);
    let catalog_fps: BTreeSet<Fingerprint> = catalog.iter().map(|(_, m)| fp_fingerprint(m, p)).collect();

    let mut counts: BTreeMap<Fingerprint, u64> = BTreeMap::new();
    let fps: Vec<Fingerprint> = nonzero.iter().map(|m| fp_fingerprint(m, p)).collect();
    for f in &fps {
        *counts.entry(*f).or_default() += 1;
    }
    let fingerprints: Vec<FingerprintCount> = counts
        .iter()
        .map(|(f, c)| FingerprintCount {
            fingerprint: *f,
            count: *c,
            in_catalog: catalog_fps.contains(f),
        })
        .collect();
    let novel_fingerprints = counts.keys().filter(|f| !catalog_fps.contains(f)).copied().collect();

    let orbits = if opts.orbits {
        let mut store = OrbitStore::new(spec.field, opts.orbit_cap)?;
        let mut found: BTreeMap<usize, u64> = BTreeMap::new();
        let mut orbit_fp: HashMap<usize, Fingerprint> = HashMap::new();
        for (m, f) in nonzero.iter().zip(&fps) {
            let id = store.orbit_id(m)?;
            *found.entry(id).or_default() += 1;
            orbit_fp.insert(id, *f);
        }
        let wanted: BTreeSet<Fingerprint> = orbit_fp.values().copied().collect();
        let mut cases: HashMap<usize, Vec<String>> = HashMap::new();
        for (cs, m) in &catalog {
            if wanted.contains(&fp_fingerprint(m, p)) {
                let id = store.orbit_id(m)?;
                if found.contains_key(&id) {
                    cases.entry(id).or_default().push(cs.to_string());
                }
            }
        }
        let mut matched = Vec::new();
        let mut unmatched = Vec::new();
        for (&id, &n) in &found {
            let entry = OrbitEntry {
                canonical: fp_to_string(store.canonical(id)),
                orbit_size: store.orbit_size(id),
                found: n,
                fingerprint: orbit_fp[&id],
                catalog_cases: cases.remove(&id).unwrap_or_default(),
            };
            if entry.catalog_cases.is_empty() {
                unmatched.push(entry);
            } else {
                matched.push(entry);
            }
        }
        matched.sort_by(|a, b| a.canonical.cmp(&b.canonical));
        unmatched.sort_by(|a, b| a.canonical.cmp(&b.canonical));
        Some(OrbitSummary {
            orbit_count: found.len(),
            matched,
            unmatched,
        })
    } else {
        None
    };

    Ok(ClassifyReport {
        field: spec.field.to_string(),
        basis_order: BASIS_NAMES.iter().map(|s| s.to_string()).collect(),
        image: spec.image.name.clone(),
        image_basis: spec.image.basis.iter().map(ToString::to_string).collect(),
        kernel_contains: spec.kernel_contains.iter().map(ToString::to_string).collect(),
        require_image_exact: spec.require_image_exact,
        candidates: res.candidates,
        rb_count: res.operators.len() as u64,
        nonzero_count: nonzero.len() as u64,
        fingerprints,
        novel_fingerprints,
        orbits,
    })
}

impl ClassifyReport {
    /// Plain-text rendering.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "field: {}   basis: {}", self.field, self.basis_order.join(" "));
        let _ = writeln!(
            s,
            "image {} (exact: {})   kernel contains: [{}]",
            self.image,
            self.require_image_exact,
            self.kernel_contains.join("; ")
        );
        let _ = writeln!(
            s,
            "candidates: {}   rota-baxter: {}   nonzero: {}",
            self.candidates, self.rb_count, self.nonzero_count
        );
        let _ = writeln!(s, "{:<64} {:>10} {:>8}", "fingerprint", "count", "catalog");
        for f in &self.fingerprints {
            let _ = writeln!(
                s,
                "{:<64} {:>10} {:>8}",
                f.fingerprint.to_string(),
                f.count,
                if f.in_catalog { "yes" } else { "NO" }
            );
        }
        if let Some(o) = &self.orbits {
            let _ = writeln!(s, "orbits: {} ({} unmatched)", o.orbit_count, o.unmatched.len());
            for e in o.matched.iter().chain(&o.unmatched) {
                let _ = writeln!(
                    s,
                    "  size {:>8}  found {:>6}  {}  [{}]",
                    e.orbit_size,
                    e.found,
                    e.canonical,
                    if e.catalog_cases.is_empty() {
                        "UNMATCHED".to_string()
                    } else {
                        e.catalog_cases.join(", ")
                    }
                );
            }
        }
        s
    }
}

/// Convenience: `Prime` for a small `p`, panicking on invalid input.
pub fn field_fp(p: u64) -> FieldSpec {
    FieldSpec::Prime(Prime::new(p).expect("odd prime"))
}
