//! Exhaustive enumeration of switching classes at small order and the
//! extremal scans built on top of it.
//!
//! Every signed graph on labeled vertices is switching equivalent to exactly
//! one representative in which the edges of a fixed spanning forest (BFS
//! from the smallest label of each component, neighbors in label order) are
//! all positive. Enumeration therefore walks every underlying graph as a
//! bitmask over the vertex pairs and, per graph, every sign assignment of
//! the non-forest edges: `2^(m - n + c)` switching classes per graph, each
//! yielded exactly once and already in canonical form.
//!
//! Scans are keyed on labeled underlying graphs and do not quotient by
//! graph isomorphism while scanning; deduplication under switching
//! isomorphism happens only in the final maximizer lists. Work is
//! partitioned into contiguous underlying-code ranges that are processed in
//! parallel and merged associatively (max of the objective, then candidate
//! union), so reports are deterministic regardless of worker count. For
//! spectral objectives, signings of an underlying graph whose all-positive
//! index already sits below the attained maximum (minus a safety margin)
//! are skipped: the index of any signing is bounded by the index of the
//! underlying graph, and so is the negated minimum eigenvalue, hence no
//! skipped class can reach the maximizer band.

use crate::constructions::gamma_construction;
use crate::graph::{are_switching_isomorphic, SignedGraph};
use crate::invariants;
use crate::perm::visit_permutations;
use crate::perturb::{self, NonnegTrialReport, TrialConfig, TrialReport};
use crate::spectra;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::Mutex;

/// Hard cap for exhaustive enumeration.
pub const MAX_ENUM_ORDER: usize = 7;
const MAX_PAIRS: usize = MAX_ENUM_ORDER * (MAX_ENUM_ORDER - 1) / 2;

/// Classes with spectral value within this band of the maximum count as
/// maximizers.
const VALUE_BAND: f64 = 1e-9;
/// Pruning margin for skipping eigensolves; must dominate `VALUE_BAND`.
const PRUNE_MARGIN: f64 = 1e-6;
const CANDIDATE_CAP: usize = 10_000;
const CACHE_VERSION: u32 = 1;

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Lexicographic indexing of the vertex pairs {u, v}, u < v.
#[derive(Clone)]
struct PairTable {
    n: usize,
    count: usize,
    idx: [[u8; MAX_ENUM_ORDER]; MAX_ENUM_ORDER],
    pairs: [(u8, u8); MAX_PAIRS],
}

impl PairTable {
    #[allow(clippy::needless_range_loop)]
    fn new(n: usize) -> Self {
        assert!(n <= MAX_ENUM_ORDER);
        let mut idx = [[0u8; MAX_ENUM_ORDER]; MAX_ENUM_ORDER];
        let mut pairs = [(0u8, 0u8); MAX_PAIRS];
        let mut next = 0u8;
        for u in 0..n {
            for v in u + 1..n {
                idx[u][v] = next;
                idx[v][u] = next;
                pairs[next as usize] = (u as u8, v as u8);
                next += 1;
            }
        }
        PairTable {
            n,
            count: next as usize,
            idx,
            pairs,
        }
    }

    fn bit(&self, u: usize, v: usize) -> u32 {
        1u32 << self.idx[u][v]
    }
}

/// Per-underlying-graph data shared by all of its signings.
#[derive(Clone)]
struct GraphShape {
    bits: u32,
    m: u32,
    rows: [u8; MAX_ENUM_ORDER],
    /// Pair indices of the edges outside the canonical spanning forest.
    nonforest: [u8; MAX_PAIRS],
    k: u32,
    /// BFS forest parents (-1 for roots) and visit order.
    parent: [i8; MAX_ENUM_ORDER],
    order: [u8; MAX_ENUM_ORDER],
}

fn analyze(pt: &PairTable, bits: u32) -> GraphShape {
    let n = pt.n;
    let mut rows = [0u8; MAX_ENUM_ORDER];
    for p in 0..pt.count {
        if bits >> p & 1 == 1 {
            let (u, v) = pt.pairs[p];
            rows[u as usize] |= 1 << v;
            rows[v as usize] |= 1 << u;
        }
    }
    let mut parent = [-1i8; MAX_ENUM_ORDER];
    let mut order = [0u8; MAX_ENUM_ORDER];
    let mut forest_bits = 0u32;
    let mut visited = 0u8;
    let mut queue = [0u8; MAX_ENUM_ORDER];
    let mut pos = 0;
    for root in 0..n {
        if visited >> root & 1 == 1 {
            continue;
        }
        visited |= 1 << root;
        let mut head = pos;
        order[pos] = root as u8;
        queue[pos] = root as u8;
        pos += 1;
        while head < pos {
            let u = queue[head] as usize;
            head += 1;
            let mut fresh = rows[u] & !visited;
            while fresh != 0 {
                let v = fresh.trailing_zeros() as usize;
                fresh &= fresh - 1;
                visited |= 1 << v;
                parent[v] = u as i8;
                forest_bits |= pt.bit(u, v);
                order[pos] = v as u8;
                queue[pos] = v as u8;
                pos += 1;
            }
        }
    }
    let mut nonforest = [0u8; MAX_PAIRS];
    let mut k = 0u32;
    for p in 0..pt.count {
        if bits >> p & 1 == 1 && forest_bits >> p & 1 == 0 {
            nonforest[k as usize] = p as u8;
            k += 1;
        }
    }
    GraphShape {
        bits,
        m: bits.count_ones(),
        rows,
        nonforest,
        k,
        parent,
        order,
    }
}

fn expand_signing(shape: &GraphShape, code: u32) -> u32 {
    let mut neg = 0u32;
    for t in 0..shape.k {
        if code >> t & 1 == 1 {
            neg |= 1u32 << shape.nonforest[t as usize];
        }
    }
    neg
}

/// Normalizes an arbitrary signing of `shape` to the canonical one with
/// all forest edges positive.
fn canonical_neg_bits(pt: &PairTable, shape: &GraphShape, neg: u32) -> u32 {
    let n = pt.n;
    let mut pot = [1i8; MAX_ENUM_ORDER];
    for i in 0..n {
        let v = shape.order[i] as usize;
        let p = shape.parent[v];
        if p >= 0 {
            let s = if neg >> pt.idx[p as usize][v] & 1 == 1 {
                -1
            } else {
                1
            };
            pot[v] = pot[p as usize] * s;
        }
    }
    let mut out = 0u32;
    for p in 0..pt.count {
        if shape.bits >> p & 1 == 1 {
            let (u, v) = pt.pairs[p];
            let s = if neg >> p & 1 == 1 { -1 } else { 1 };
            if s * pot[u as usize] * pot[v as usize] < 0 {
                out |= 1 << p;
            }
        }
    }
    out
}

/// One switching class, identified by its canonical representative: the
/// underlying graph as a bitmask over vertex pairs and the set of negative
/// edges (always outside the canonical spanning forest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassCode {
    pub n: usize,
    pub graph_bits: u32,
    pub neg_bits: u32,
}

impl ClassCode {
    pub fn graph(&self) -> SignedGraph {
        let pt = PairTable::new(self.n);
        decode_graph(&pt, self.graph_bits, self.neg_bits)
    }
}

fn decode_graph(pt: &PairTable, bits: u32, neg: u32) -> SignedGraph {
    let mut edges = Vec::with_capacity(bits.count_ones() as usize);
    for p in 0..pt.count {
        if bits >> p & 1 == 1 {
            let (u, v) = pt.pairs[p];
            let s = if neg >> p & 1 == 1 { -1 } else { 1 };
            edges.push((u as usize, v as usize, s));
        }
    }
    SignedGraph::new(pt.n, &edges).expect("decoded class codes are valid")
}

fn encode_graph(pt: &PairTable, g: &SignedGraph) -> (u32, u32) {
    let mut bits = 0u32;
    let mut neg = 0u32;
    for &(u, v, s) in g.edges() {
        bits |= pt.bit(u, v);
        if s < 0 {
            neg |= pt.bit(u, v);
        }
    }
    (bits, neg)
}

/// Iterator over all switching classes on `n` labeled vertices, one
/// canonical representative each.
pub struct SwitchingClassIter {
    pt: PairTable,
    next_graph: u32,
    end: u32,
    shape: Option<GraphShape>,
    sign_code: u32,
}

impl Iterator for SwitchingClassIter {
    type Item = ClassCode;

    fn next(&mut self) -> Option<ClassCode> {
        loop {
            if let Some(shape) = &self.shape {
                if self.sign_code < 1u32 << shape.k {
                    let neg = expand_signing(shape, self.sign_code);
                    self.sign_code += 1;
                    return Some(ClassCode {
                        n: self.pt.n,
                        graph_bits: shape.bits,
                        neg_bits: neg,
                    });
                }
                self.shape = None;
            }
            if self.next_graph == self.end {
                return None;
            }
            self.shape = Some(analyze(&self.pt, self.next_graph));
            self.next_graph += 1;
            self.sign_code = 0;
        }
    }
}

/// Enumerates every switching class on `1 <= n <= 7` labeled vertices.
pub fn enumerate_switching_classes(n: usize) -> Result<SwitchingClassIter> {
    if !(1..=MAX_ENUM_ORDER).contains(&n) {
        return Err(Error::ParameterRange(format!(
            "switching-class enumeration supports 1 <= n <= {MAX_ENUM_ORDER}, got {n}"
        )));
    }
    let pt = PairTable::new(n);
    let end = 1u32 << pt.count;
    Ok(SwitchingClassIter {
        pt,
        next_graph: 0,
        end,
        shape: None,
        sign_code: 0,
    })
}

/// Forbidden family for a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Forbidden {
    /// All unbalanced signed complete graphs on `order` vertices.
    UnbalancedComplete { order: usize },
    /// Negative triangles.
    NegativeTriangle,
}

impl Forbidden {
    fn clique_size(&self) -> usize {
        match self {
            Forbidden::UnbalancedComplete { order } => *order,
            Forbidden::NegativeTriangle => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Edges,
    Index,
    Radius,
}

impl Objective {
    fn is_spectral(&self) -> bool {
        matches!(self, Objective::Index | Objective::Radius)
    }
}

/// Class tallies over a whole scan. `free` counts the feasible classes:
/// unbalanced and avoiding the forbidden family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub classes: u64,
    pub unbalanced: u64,
    pub free: u64,
}

/// Execution options for scans.
#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Base path for resumable scan checkpoints; one JSON-lines file per
    /// scan configuration is derived from it.
    pub cache_path: Option<PathBuf>,
    /// The full spectral scan at order 7 eigensolves across 165 million
    /// classes; it must be requested explicitly.
    pub allow_heavy: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CandidateRec {
    g: u32,
    s: u32,
    value: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct ChunkResult {
    counts: ClassCounts,
    best_edges: Option<u64>,
    best_value: Option<f64>,
    candidates: Vec<CandidateRec>,
    truncated: bool,
}

struct ScanSpec {
    n: usize,
    forbidden: Forbidden,
    objective: Objective,
    /// Known attained objective value used to seed pruning (spectral only).
    seed_value: Option<f64>,
}

/// Fundamental-triangle parity masks for every clique of the requested size:
/// the clique is balanced for a signing exactly when every mask meets the
/// negative-edge set with even parity.
fn clique_masks(pt: &PairTable, shape: &GraphShape, size: usize) -> Vec<Vec<u32>> {
    let n = pt.n;
    if size < 3 || size > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut members = [0u8; MAX_ENUM_ORDER];
    fn grow(
        pt: &PairTable,
        shape: &GraphShape,
        size: usize,
        members: &mut [u8; MAX_ENUM_ORDER],
        depth: usize,
        mut cand: u8,
        out: &mut Vec<Vec<u32>>,
    ) {
        if depth == size {
            let v0 = members[0] as usize;
            let mut masks = Vec::with_capacity((size - 1) * (size - 2) / 2);
            for a in 1..size {
                for b in a + 1..size {
                    let va = members[a] as usize;
                    let vb = members[b] as usize;
                    masks.push(pt.bit(v0, va) | pt.bit(v0, vb) | pt.bit(va, vb));
                }
            }
            out.push(masks);
            return;
        }
        while cand != 0 {
            if (cand.count_ones() as usize) < size - depth {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            members[depth] = v as u8;
            grow(
                pt,
                shape,
                size,
                members,
                depth + 1,
                cand & shape.rows[v],
                out,
            );
        }
    }
    grow(
        pt,
        shape,
        size,
        &mut members,
        0,
        ((1u16 << n) - 1) as u8,
        &mut out,
    );
    out
}

fn signing_is_free(neg: u32, cliques: &[Vec<u32>]) -> bool {
    cliques.iter().all(|masks| {
        masks
            .iter()
            .all(|&m| (neg & m).count_ones().is_multiple_of(2))
    })
}

/// Extreme eigenvalues of a class, written into the caller's buffer.
fn class_extremes(pt: &PairTable, bits: u32, neg: u32, buf: &mut [f64]) -> (f64, f64) {
    let n = pt.n;
    let a = &mut buf[..n * n];
    a.fill(0.0);
    for p in 0..pt.count {
        if bits >> p & 1 == 1 {
            let (u, v) = (pt.pairs[p].0 as usize, pt.pairs[p].1 as usize);
            let s = if neg >> p & 1 == 1 { -1.0 } else { 1.0 };
            a[u * n + v] = s;
            a[v * n + u] = s;
        }
    }
    spectra::jacobi_eigen(n, a, None);
    let mut hi = a[0];
    let mut lo = a[0];
    for i in 1..n {
        let d = a[i * n + i];
        hi = hi.max(d);
        lo = lo.min(d);
    }
    (hi, lo)
}

fn compact_candidates(result: &mut ChunkResult, objective: Objective) {
    match objective {
        Objective::Edges => {
            if let Some(best) = result.best_edges {
                result.candidates.retain(|c| c.value as u64 == best);
            }
        }
        _ => {
            if let Some(best) = result.best_value {
                result.candidates.retain(|c| c.value >= best - VALUE_BAND);
            }
        }
    }
    if result.candidates.len() > CANDIDATE_CAP {
        result
            .candidates
            .sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap());
        result.candidates.truncate(CANDIDATE_CAP);
        result.truncated = true;
    }
}

fn scan_chunk(pt: &PairTable, spec: &ScanSpec, range: std::ops::Range<u32>) -> ChunkResult {
    let mut result = ChunkResult::default();
    let clique_size = spec.forbidden.clique_size();
    let mut buf = [0f64; MAX_ENUM_ORDER * MAX_ENUM_ORDER];
    // value attained so far, for pruning whole signing families
    let mut attained = spec.seed_value.unwrap_or(f64::NEG_INFINITY);
    for gbits in range {
        let shape = analyze(pt, gbits);
        let total = 1u64 << shape.k;
        result.counts.classes += total;
        result.counts.unbalanced += total - 1;
        let cliques = clique_masks(pt, &shape, clique_size);
        let solve_signings = if spec.objective.is_spectral() {
            let (underlying_index, _) = class_extremes(pt, gbits, 0, &mut buf);
            underlying_index >= attained - PRUNE_MARGIN
        } else {
            false
        };
        for code in 1..1u32 << shape.k {
            let neg = expand_signing(&shape, code);
            if !signing_is_free(neg, &cliques) {
                continue;
            }
            result.counts.free += 1;
            match spec.objective {
                Objective::Edges => {
                    let m = shape.m as u64;
                    if result.best_edges.is_none_or(|b| m > b) {
                        result.best_edges = Some(m);
                    }
                    if result.best_edges == Some(m) {
                        result.candidates.push(CandidateRec {
                            g: gbits,
                            s: neg,
                            value: m as f64,
                        });
                    }
                }
                Objective::Index | Objective::Radius => {
                    if !solve_signings {
                        continue;
                    }
                    let (hi, lo) = class_extremes(pt, gbits, neg, &mut buf);
                    let value = match spec.objective {
                        Objective::Index => hi,
                        _ => hi.max(-lo),
                    };
                    if value > attained {
                        attained = value;
                    }
                    if result.best_value.is_none_or(|b| value > b) {
                        result.best_value = Some(value);
                    }
                    if value >= result.best_value.unwrap() - VALUE_BAND {
                        result.candidates.push(CandidateRec {
                            g: gbits,
                            s: neg,
                            value,
                        });
                    }
                }
            }
        }
        if result.candidates.len() > 4 * CANDIDATE_CAP {
            compact_candidates(&mut result, spec.objective);
        }
    }
    compact_candidates(&mut result, spec.objective);
    result
}

fn merge_chunks(mut a: ChunkResult, b: ChunkResult, objective: Objective) -> ChunkResult {
    a.counts.classes += b.counts.classes;
    a.counts.unbalanced += b.counts.unbalanced;
    a.counts.free += b.counts.free;
    a.truncated |= b.truncated;
    match objective {
        Objective::Edges => {
            a.best_edges = a.best_edges.max(b.best_edges);
        }
        _ => {
            a.best_value = match (a.best_value, b.best_value) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            };
        }
    }
    a.candidates.extend(b.candidates);
    compact_candidates(&mut a, objective);
    a
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct CacheHeader {
    version: u32,
    n: usize,
    forbidden: Forbidden,
    objective: Objective,
    chunks: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheRecord {
    chunk: usize,
    result: ChunkResult,
}

/// Derives one checkpoint file per scan configuration from the base path,
/// so a multi-scan run can share a single `--cache` argument.
fn per_scan_cache_path(base: &std::path::Path, header: &CacheHeader) -> PathBuf {
    let stem = base
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scan-cache");
    let family = match header.forbidden {
        Forbidden::UnbalancedComplete { order } => format!("k{order}"),
        Forbidden::NegativeTriangle => "c3".to_string(),
    };
    let objective = match header.objective {
        Objective::Edges => "edges",
        Objective::Index => "index",
        Objective::Radius => "radius",
    };
    base.with_file_name(format!("{stem}-{objective}-{family}-n{}.jsonl", header.n))
}

fn load_cache(path: &PathBuf, header: &CacheHeader) -> Result<HashMap<usize, ChunkResult>> {
    let mut done = HashMap::new();
    if !path.exists() {
        let mut file = std::fs::File::create(path)
            .map_err(|e| Error::Cache(format!("create {}: {e}", path.display())))?;
        let line = serde_json::to_string(header).expect("header serializes");
        writeln!(file, "{line}").map_err(|e| Error::Cache(e.to_string()))?;
        return Ok(done);
    }
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Cache(format!("open {}: {e}", path.display())))?;
    let mut lines = std::io::BufReader::new(file).lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Cache("cache file is empty".into()))?
        .map_err(|e| Error::Cache(e.to_string()))?;
    let found: CacheHeader =
        serde_json::from_str(&first).map_err(|e| Error::Cache(format!("bad cache header: {e}")))?;
    if &found != header {
        return Err(Error::Cache(
            "cache file was produced by a different scan configuration".into(),
        ));
    }
    let mut corrupt = false;
    for line in lines {
        let line = line.map_err(|e| Error::Cache(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CacheRecord>(&line) {
            Ok(rec) if rec.chunk < header.chunks => {
                done.insert(rec.chunk, rec.result);
            }
            _ => {
                // interrupted write; drop the tail and rewrite below
                corrupt = true;
                break;
            }
        }
    }
    if corrupt {
        let mut file = std::fs::File::create(path)
            .map_err(|e| Error::Cache(format!("rewrite {}: {e}", path.display())))?;
        let line = serde_json::to_string(header).expect("header serializes");
        writeln!(file, "{line}").map_err(|e| Error::Cache(e.to_string()))?;
        for (chunk, result) in &done {
            let rec = CacheRecord {
                chunk: *chunk,
                result: result.clone(),
            };
            let line = serde_json::to_string(&rec).expect("record serializes");
            writeln!(file, "{line}").map_err(|e| Error::Cache(e.to_string()))?;
        }
    }
    Ok(done)
}

fn scan(spec: &ScanSpec, opts: &ScanOptions) -> Result<ChunkResult> {
    if spec.n == MAX_ENUM_ORDER && spec.objective.is_spectral() && !opts.allow_heavy {
        return Err(Error::ParameterRange(format!(
            "the full spectral scan at order {MAX_ENUM_ORDER} is expensive; \
             request it explicitly (CLI: --force, API: ScanOptions::allow_heavy)"
        )));
    }
    let pt = PairTable::new(spec.n);
    let total = 1u64 << pt.count;
    let chunk_size = (total / 1024).max(1) as u32;
    let chunk_count = total.div_ceil(chunk_size as u64) as usize;
    let header = CacheHeader {
        version: CACHE_VERSION,
        n: spec.n,
        forbidden: spec.forbidden,
        objective: spec.objective,
        chunks: chunk_count,
    };
    let mut done: HashMap<usize, ChunkResult> = HashMap::new();
    let mut writer: Option<Mutex<std::fs::File>> = None;
    if let Some(base) = &opts.cache_path {
        let path = per_scan_cache_path(base, &header);
        done = load_cache(&path, &header)?;
        let file = std::fs::OpenOptions::new()
            .append(true)
            .open(&path)
            .map_err(|e| Error::Cache(format!("append {}: {e}", path.display())))?;
        writer = Some(Mutex::new(file));
    }
    let pending: Vec<usize> = (0..chunk_count)
        .filter(|id| !done.contains_key(id))
        .collect();
    let run = |ids: &[usize]| -> Vec<(usize, ChunkResult)> {
        ids.par_iter()
            .map(|&id| {
                let lo = id as u32 * chunk_size;
                let hi = ((id as u64 + 1) * chunk_size as u64).min(total) as u32;
                let result = scan_chunk(&pt, spec, lo..hi);
                if let Some(w) = &writer {
                    let rec = CacheRecord {
                        chunk: id,
                        result: result.clone(),
                    };
                    let line = serde_json::to_string(&rec).expect("record serializes");
                    let mut file = w.lock().expect("cache writer lock");
                    let _ = writeln!(file, "{line}");
                    let _ = file.flush();
                }
                (id, result)
            })
            .collect()
    };
    let fresh = match opts.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::ParameterRange(format!("thread pool: {e}")))?;
            pool.install(|| run(&pending))
        }
        None => run(&pending),
    };
    done.extend(fresh);
    let mut merged = ChunkResult::default();
    for id in 0..chunk_count {
        let part = done.remove(&id).expect("all chunks computed");
        merged = merge_chunks(merged, part, spec.objective);
    }
    Ok(merged)
}

/// Canonical key of a switching-isomorphism class: the lexicographically
/// smallest (underlying bitmask, canonical signing) over all vertex
/// relabelings. Two graphs are switching isomorphic exactly when their keys
/// agree.
fn class_key(pt: &PairTable, graph_bits: u32, neg_bits: u32) -> u64 {
    let n = pt.n;
    let mut best = u64::MAX;
    visit_permutations(n, |perm| {
        let mut gb = 0u32;
        let mut nb = 0u32;
        for p in 0..pt.count {
            if graph_bits >> p & 1 == 1 {
                let (u, v) = pt.pairs[p];
                let q = pt.idx[perm[u as usize]][perm[v as usize]];
                gb |= 1u32 << q;
                if neg_bits >> p & 1 == 1 {
                    nb |= 1u32 << q;
                }
            }
        }
        let shape = analyze(pt, gb);
        let canon = canonical_neg_bits(pt, &shape, nb);
        let key = (gb as u64) << MAX_PAIRS | canon as u64;
        if key < best {
            best = key;
        }
        true
    });
    best
}

fn key_to_graph(pt: &PairTable, key: u64) -> SignedGraph {
    let gb = (key >> MAX_PAIRS) as u32;
    let nb = (key & ((1u64 << MAX_PAIRS) - 1)) as u32;
    decode_graph(pt, gb, nb)
}

/// One maximizer class in a report.
#[derive(Debug, Clone, Serialize)]
pub struct MaximizerEntry {
    /// Canonically labeled representative in SG1 text.
    pub sg1: String,
    pub edges: u64,
    /// Objective value for spectral scans.
    pub value: Option<f64>,
    /// Negative edges of the canonical switching form.
    pub negative_edges_canonical: usize,
    /// For edge scans with a forbidden complete family of order r+1:
    /// whether the maximizer contains an unbalanced complete subgraph of
    /// order r.
    pub contains_unbalanced_core: Option<bool>,
}

/// Result of one exhaustive extremal scan.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub n: usize,
    pub forbidden: Forbidden,
    pub objective: Objective,
    pub counts: ClassCounts,
    pub best_edges: Option<u64>,
    pub best_value: Option<f64>,
    pub expected_edges: Option<u64>,
    pub expected_value: Option<f64>,
    /// No feasible class exceeds the expected bound.
    pub bound_holds: bool,
    /// Some feasible class attains the expected bound.
    pub bound_attained: bool,
    /// For index scans: the maximizer is unique up to switching
    /// isomorphism and coincides with the extremal construction.
    pub unique_maximizer_matches_construction: Option<bool>,
    /// Structural sanity of the maximizers (unbalanced core for edge
    /// scans, a single canonical negative edge for index scans).
    pub maximizer_structure_ok: Option<bool>,
    /// Maximizer classes up to switching isomorphism, canonically labeled.
    pub maximizers: Vec<MaximizerEntry>,
    pub maximizers_truncated: bool,
    pub passed: bool,
    pub notes: Vec<String>,
}

fn dedup_maximizers(pt: &PairTable, candidates: &[CandidateRec]) -> Vec<(u64, f64)> {
    let mut keyed: Vec<(u64, f64)> = candidates
        .par_iter()
        .map(|c| (class_key(pt, c.g, c.s), c.value))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.partial_cmp(&a.1).unwrap()));
    keyed.dedup_by_key(|e| e.0);
    keyed
}

/// Maximum edge count over unbalanced classes avoiding unbalanced complete
/// subgraphs of order `r + 1`, with the expected closed-form bound
/// `n(n-1)/2 - (n-r)` asserted and all maximizers listed up to switching
/// isomorphism.
pub fn max_edges_report(n: usize, r: usize) -> Result<ExtremalReport> {
    max_edges_report_with(n, r, &ScanOptions::default())
}

pub fn max_edges_report_with(n: usize, r: usize, opts: &ScanOptions) -> Result<ExtremalReport> {
    check_nr(n, r)?;
    let spec = ScanSpec {
        n,
        forbidden: Forbidden::UnbalancedComplete { order: r + 1 },
        objective: Objective::Edges,
        seed_value: None,
    };
    let raw = scan(&spec, opts)?;
    let pt = PairTable::new(n);
    let expected = (pair_count(n) - (n - r)) as u64;
    let classes = dedup_maximizers(&pt, &raw.candidates);
    let mut maximizers = Vec::with_capacity(classes.len());
    let mut structure_ok = true;
    for (key, value) in &classes {
        let g = key_to_graph(&pt, *key);
        let core = invariants::find_unbalanced_complete(&g, r)?.is_some();
        structure_ok &= core;
        maximizers.push(MaximizerEntry {
            sg1: crate::sg1::emit(&g),
            edges: g.edge_count() as u64,
            value: Some(*value),
            negative_edges_canonical: g.canonical_switch().negative_edge_count(),
            contains_unbalanced_core: Some(core),
        });
    }
    let bound_holds = raw.best_edges.is_none_or(|b| b <= expected);
    let bound_attained = raw.best_edges == Some(expected);
    let mut notes = Vec::new();
    if raw.counts.free == 0 {
        notes.push("no feasible class at this order".into());
    }
    let passed = bound_holds && bound_attained && structure_ok;
    Ok(ExtremalReport {
        n,
        forbidden: spec.forbidden,
        objective: Objective::Edges,
        counts: raw.counts,
        best_edges: raw.best_edges,
        best_value: None,
        expected_edges: Some(expected),
        expected_value: None,
        bound_holds,
        bound_attained,
        unique_maximizer_matches_construction: None,
        maximizer_structure_ok: Some(structure_ok),
        maximizers,
        maximizers_truncated: raw.truncated,
        passed,
        notes,
    })
}

/// Maximum index over unbalanced classes avoiding unbalanced complete
/// subgraphs of order `r + 1`. Asserts that the maximum matches the index
/// of the extremal construction within 1e-9 and that every class in the
/// maximizer band is switching isomorphic to it.
pub fn max_index_report(n: usize, r: usize) -> Result<ExtremalReport> {
    max_index_report_with(n, r, &ScanOptions::default())
}

pub fn max_index_report_with(n: usize, r: usize, opts: &ScanOptions) -> Result<ExtremalReport> {
    check_nr(n, r)?;
    let construction = gamma_construction(n, r)?;
    let target = spectra::index(&construction);
    let spec = ScanSpec {
        n,
        forbidden: Forbidden::UnbalancedComplete { order: r + 1 },
        objective: Objective::Index,
        seed_value: Some(target),
    };
    let raw = scan(&spec, opts)?;
    let pt = PairTable::new(n);
    let classes = dedup_maximizers(&pt, &raw.candidates);
    let mut maximizers = Vec::with_capacity(classes.len());
    let mut structure_ok = true;
    let mut matches_construction = !classes.is_empty();
    for (key, value) in &classes {
        let g = key_to_graph(&pt, *key);
        let canonical_negatives = g.canonical_switch().negative_edge_count();
        structure_ok &= canonical_negatives == 1;
        matches_construction &= are_switching_isomorphic(&g, &construction);
        maximizers.push(MaximizerEntry {
            sg1: crate::sg1::emit(&g),
            edges: g.edge_count() as u64,
            value: Some(*value),
            negative_edges_canonical: canonical_negatives,
            contains_unbalanced_core: None,
        });
    }
    let unique = classes.len() == 1 && matches_construction;
    let bound_holds = raw.best_value.is_none_or(|b| b <= target + VALUE_BAND);
    let bound_attained = raw
        .best_value
        .is_some_and(|b| (b - target).abs() <= VALUE_BAND);
    let passed = bound_holds && bound_attained && unique && structure_ok;
    Ok(ExtremalReport {
        n,
        forbidden: spec.forbidden,
        objective: Objective::Index,
        counts: raw.counts,
        best_edges: None,
        best_value: raw.best_value,
        expected_edges: None,
        expected_value: Some(target),
        bound_holds,
        bound_attained,
        unique_maximizer_matches_construction: Some(unique),
        maximizer_structure_ok: Some(structure_ok),
        maximizers,
        maximizers_truncated: raw.truncated,
        passed,
        notes: Vec::new(),
    })
}

fn check_nr(n: usize, r: usize) -> Result<()> {
    if !(1..=MAX_ENUM_ORDER).contains(&n) || !(3..=n.saturating_sub(1)).contains(&r) {
        return Err(Error::ParameterRange(format!(
            "scan requires 3 <= r <= n-1 and n <= {MAX_ENUM_ORDER}, got n={n}, r={r}"
        )));
    }
    Ok(())
}

/// Edge and spectral-radius extremal reports over unbalanced classes with
/// no negative triangle. The closed-form targets `n(n-1)/2 - (n-2)` and
/// `(sqrt(n^2-8) + n - 4)/2` are asserted; maximizer families are reported
/// without a uniqueness claim.
pub fn c3_reports(n: usize) -> Result<(ExtremalReport, ExtremalReport)> {
    c3_reports_with(n, &ScanOptions::default())
}

pub fn c3_reports_with(n: usize, opts: &ScanOptions) -> Result<(ExtremalReport, ExtremalReport)> {
    if !(3..=MAX_ENUM_ORDER).contains(&n) {
        return Err(Error::ParameterRange(format!(
            "triangle-free scan requires 3 <= n <= {MAX_ENUM_ORDER}, got {n}"
        )));
    }
    let pt = PairTable::new(n);

    let edge_spec = ScanSpec {
        n,
        forbidden: Forbidden::NegativeTriangle,
        objective: Objective::Edges,
        seed_value: None,
    };
    let raw = scan(&edge_spec, opts)?;
    let expected_edges = (pair_count(n).saturating_sub(n - 2)) as u64;
    let feasible_empty = raw.counts.free == 0;
    let classes = dedup_maximizers(&pt, &raw.candidates);
    let maximizers: Vec<MaximizerEntry> = classes
        .iter()
        .map(|(key, value)| {
            let g = key_to_graph(&pt, *key);
            MaximizerEntry {
                sg1: crate::sg1::emit(&g),
                edges: g.edge_count() as u64,
                value: Some(*value),
                negative_edges_canonical: g.canonical_switch().negative_edge_count(),
                contains_unbalanced_core: None,
            }
        })
        .collect();
    let bound_holds = raw.best_edges.is_none_or(|b| b <= expected_edges);
    let bound_attained = raw.best_edges == Some(expected_edges);
    let mut notes = Vec::new();
    if feasible_empty {
        notes.push("no feasible class at this order".into());
    }
    let edge_report = ExtremalReport {
        n,
        forbidden: Forbidden::NegativeTriangle,
        objective: Objective::Edges,
        counts: raw.counts,
        best_edges: raw.best_edges,
        best_value: None,
        expected_edges: Some(expected_edges),
        expected_value: None,
        bound_holds,
        bound_attained,
        unique_maximizer_matches_construction: None,
        maximizer_structure_ok: None,
        maximizers,
        maximizers_truncated: raw.truncated,
        passed: bound_holds && (bound_attained || feasible_empty),
        notes,
    };

    let radius_spec = ScanSpec {
        n,
        forbidden: Forbidden::NegativeTriangle,
        objective: Objective::Radius,
        seed_value: None,
    };
    let raw = scan(&radius_spec, opts)?;
    let expected_radius = 0.5 * (((n * n - 8) as f64).sqrt() + n as f64 - 4.0);
    let classes = dedup_maximizers(&pt, &raw.candidates);
    let maximizers: Vec<MaximizerEntry> = classes
        .iter()
        .map(|(key, value)| {
            let g = key_to_graph(&pt, *key);
            MaximizerEntry {
                sg1: crate::sg1::emit(&g),
                edges: g.edge_count() as u64,
                value: Some(*value),
                negative_edges_canonical: g.canonical_switch().negative_edge_count(),
                contains_unbalanced_core: None,
            }
        })
        .collect();
    let bound_holds = raw
        .best_value
        .is_none_or(|b| b <= expected_radius + VALUE_BAND);
    let bound_attained = raw
        .best_value
        .is_some_and(|b| (b - expected_radius).abs() <= VALUE_BAND);
    let mut notes = Vec::new();
    if feasible_empty {
        notes.push("no feasible class at this order".into());
    }
    let radius_report = ExtremalReport {
        n,
        forbidden: Forbidden::NegativeTriangle,
        objective: Objective::Radius,
        counts: raw.counts,
        best_edges: None,
        best_value: raw.best_value,
        expected_edges: None,
        expected_value: Some(expected_radius),
        bound_holds,
        bound_attained,
        unique_maximizer_matches_construction: None,
        maximizer_structure_ok: None,
        maximizers,
        maximizers_truncated: raw.truncated,
        passed: bound_holds && (bound_attained || feasible_empty),
        notes,
    };
    Ok((edge_report, radius_report))
}

/// One eigenvalue-bound sweep over all enumerated classes.
#[derive(Debug, Clone, Serialize)]
pub struct BoundSweep {
    pub name: &'static str,
    pub checked: u64,
    pub violations: u64,
    /// SG1 text of the first violating class, if any.
    pub example: Option<String>,
}

impl BoundSweep {
    fn new(name: &'static str) -> Self {
        BoundSweep {
            name,
            checked: 0,
            violations: 0,
            example: None,
        }
    }

    fn record(&mut self, ok: bool, class: impl Fn() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.example.is_none() {
                self.example = Some(class());
            }
        }
    }

    fn absorb(&mut self, other: &BoundSweep) {
        self.checked += other.checked;
        self.violations += other.violations;
        if self.example.is_none() {
            self.example = other.example.clone();
        }
    }
}

/// Eigenvalue-bound sweeps over every switching class up to a small order,
/// plus the radius/index hypothesis grid on constructions and the
/// non-negative eigenvector trials.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaSweepReport {
    pub max_order: usize,
    pub sweeps: Vec<BoundSweep>,
    pub radius_index_grid: Vec<invariants::RadiusIndexCheck>,
    pub nonneg: NonnegTrialReport,
    pub passed: bool,
}

const SWEEP_NAMES: [&str; 6] = [
    "clique_ratio",                         // lambda_1 <= n (1 - 1/omega)
    "balanced_clique_ratio",                // lambda_1 <= n (1 - 1/omega_b)
    "underlying_index",                     // lambda_1 <= lambda_1 of the underlying graph
    "order_minus_one",                      // lambda_1 <= n - 1
    "order_equality_iff_balanced_complete", // equality only there (n <= 5)
    "eigenvector_zero_count",               // lambda_1 > n - k forces <= k-2 zero entries
];

fn sweep_order(n: usize) -> Vec<BoundSweep> {
    let pt = PairTable::new(n);
    let total = 1u64 << pt.count;
    let chunk = (total / 256).max(1) as u32;
    let ranges: Vec<(u32, u32)> = (0..)
        .map(|i| (i * chunk, ((i as u64 + 1) * chunk as u64).min(total) as u32))
        .take_while(|(lo, _)| (*lo as u64) < total)
        .collect();
    let partials: Vec<Vec<BoundSweep>> = ranges
        .par_iter()
        .map(|&(lo, hi)| {
            let mut sweeps: Vec<BoundSweep> =
                SWEEP_NAMES.iter().map(|s| BoundSweep::new(s)).collect();
            for gbits in lo..hi {
                let shape = analyze(&pt, gbits);
                let underlying = decode_graph(&pt, gbits, 0);
                let omega = invariants::clique_number(&underlying);
                let lambda_underlying = spectra::index(&underlying);
                let complete = shape.m as usize == pair_count(n);
                for code in 0..1u32 << shape.k {
                    let neg = expand_signing(&shape, code);
                    let g = decode_graph(&pt, gbits, neg);
                    let (lambda, x) = spectra::leading_eigenpair(&g);
                    let sg1 = || crate::sg1::emit(&g);
                    let nf = n as f64;
                    sweeps[0].record(lambda <= nf * (1.0 - 1.0 / omega as f64) + 1e-9, sg1);
                    let omega_b = invariants::balanced_clique_number(&g);
                    sweeps[1].record(lambda <= nf * (1.0 - 1.0 / omega_b as f64) + 1e-9, sg1);
                    sweeps[2].record(lambda <= lambda_underlying + 1e-9, sg1);
                    sweeps[3].record(lambda <= nf - 1.0 + 1e-9, sg1);
                    if n <= 5 {
                        let at_bound = (lambda - (nf - 1.0)).abs() <= 1e-9;
                        let balanced_complete = code == 0 && complete;
                        sweeps[4].record(at_bound == balanced_complete, sg1);
                    }
                    // smallest k with lambda strictly above n - k
                    let k0 = (nf - lambda + 1e-9).floor() as i64 + 1;
                    let k0 = k0.max(2);
                    if k0 as usize <= n {
                        let zeros = x.iter().filter(|t| t.abs() <= 1e-7).count();
                        sweeps[5].record(zeros <= k0 as usize - 2, sg1);
                    }
                }
            }
            sweeps
        })
        .collect();
    let mut merged: Vec<BoundSweep> = SWEEP_NAMES.iter().map(|s| BoundSweep::new(s)).collect();
    for partial in &partials {
        for (into, from) in merged.iter_mut().zip(partial) {
            into.absorb(from);
        }
    }
    merged
}

/// Runs the bound sweeps at every order up to `max_order` (capped at 6).
pub fn lemma_sweeps(max_order: usize, seed: u64, nonneg_trials: usize) -> LemmaSweepReport {
    let max_order = max_order.clamp(1, 6);
    let mut sweeps: Vec<BoundSweep> = SWEEP_NAMES.iter().map(|s| BoundSweep::new(s)).collect();
    for n in 1..=max_order {
        for (into, from) in sweeps.iter_mut().zip(&sweep_order(n)) {
            into.absorb(from);
        }
    }
    let grid = [(8, 4), (9, 4), (10, 4), (10, 5), (12, 4), (12, 5), (12, 6)];
    let radius_index_grid: Vec<invariants::RadiusIndexCheck> = grid
        .iter()
        .map(|&(n, r)| {
            let g = gamma_construction(n, r).expect("grid parameters valid");
            invariants::check_radius_equals_index(&g, r).expect("grid parameters valid")
        })
        .collect();
    let nonneg = perturb::run_nonneg_trials(seed, nonneg_trials);
    let passed = sweeps.iter().all(|s| s.violations == 0)
        && radius_index_grid
            .iter()
            .all(|c| c.hypotheses_hold && c.radius_equals_index == Some(true))
        && nonneg.passed;
    LemmaSweepReport {
        max_order,
        sweeps,
        radius_index_grid,
        nonneg,
        passed,
    }
}

/// Which checks [`verify_all`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyModes {
    pub edges: bool,
    pub index: bool,
    pub c3: bool,
    pub lemmas: bool,
    pub perturbations: bool,
}

impl VerifyModes {
    pub fn all() -> Self {
        VerifyModes {
            edges: true,
            index: true,
            c3: true,
            lemmas: true,
            perturbations: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub n_min: usize,
    pub n_max: usize,
    pub r_min: usize,
    /// Upper bound for r; `None` means up to `n - 1` at each order.
    pub r_max: Option<usize>,
    pub modes: VerifyModes,
    pub seed: u64,
    pub trials: usize,
    pub scan: ScanOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_min: 4,
            n_max: 6,
            r_min: 3,
            r_max: None,
            modes: VerifyModes::all(),
            seed: 7,
            trials: 1000,
            scan: ScanOptions::default(),
        }
    }
}

/// Aggregate outcome of [`verify_all`]. Failed assertions are collected as
/// data rather than raised.
#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub n_min: usize,
    pub n_max: usize,
    pub edge_reports: Vec<ExtremalReport>,
    pub index_reports: Vec<ExtremalReport>,
    pub c3_edge_reports: Vec<ExtremalReport>,
    pub c3_radius_reports: Vec<ExtremalReport>,
    pub lemma_sweeps: Option<LemmaSweepReport>,
    pub perturbation: Option<TrialReport>,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Runs every enumeration assertion in range plus the lemma sweeps and the
/// perturbation trials, and aggregates pass/fail per check.
pub fn verify_all(opts: &VerifyOptions) -> Result<VerifySummary> {
    match opts.scan.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::ParameterRange(format!("thread pool: {e}")))?;
            let mut inner = opts.clone();
            inner.scan.jobs = None;
            pool.install(|| verify_all_inner(&inner))
        }
        None => verify_all_inner(opts),
    }
}

fn verify_all_inner(opts: &VerifyOptions) -> Result<VerifySummary> {
    let mut summary = VerifySummary {
        n_min: opts.n_min,
        n_max: opts.n_max,
        edge_reports: Vec::new(),
        index_reports: Vec::new(),
        c3_edge_reports: Vec::new(),
        c3_radius_reports: Vec::new(),
        lemma_sweeps: None,
        perturbation: None,
        failures: Vec::new(),
        passed: true,
    };
    if opts.n_min > opts.n_max || opts.n_max > MAX_ENUM_ORDER {
        return Err(Error::ParameterRange(format!(
            "verification range {}..={} is not within 1..={MAX_ENUM_ORDER}",
            opts.n_min, opts.n_max
        )));
    }
    for n in opts.n_min..=opts.n_max {
        if opts.modes.edges || opts.modes.index {
            let r_hi = opts
                .r_max
                .unwrap_or(n.saturating_sub(1))
                .min(n.saturating_sub(1));
            for r in opts.r_min.max(3)..=r_hi {
                if opts.modes.edges {
                    let report = max_edges_report_with(n, r, &opts.scan)?;
                    if !report.passed {
                        summary
                            .failures
                            .push(format!("edge bound failed at n={n}, r={r}"));
                    }
                    summary.edge_reports.push(report);
                }
                if opts.modes.index {
                    let report = max_index_report_with(n, r, &opts.scan)?;
                    if !report.passed {
                        summary
                            .failures
                            .push(format!("index bound failed at n={n}, r={r}"));
                    }
                    summary.index_reports.push(report);
                }
            }
        }
        if opts.modes.c3 && n >= 3 {
            let (edge_report, radius_report) = c3_reports_with(n, &opts.scan)?;
            if !edge_report.passed {
                summary
                    .failures
                    .push(format!("triangle-free edge bound failed at n={n}"));
            }
            if !radius_report.passed {
                summary
                    .failures
                    .push(format!("triangle-free radius bound failed at n={n}"));
            }
            summary.c3_edge_reports.push(edge_report);
            summary.c3_radius_reports.push(radius_report);
        }
    }
    if opts.modes.lemmas {
        let report = lemma_sweeps(opts.n_max, opts.seed, opts.trials);
        if !report.passed {
            for sweep in &report.sweeps {
                if sweep.violations > 0 {
                    summary.failures.push(format!(
                        "{} violated {} time(s)",
                        sweep.name, sweep.violations
                    ));
                }
            }
            if !report.nonneg.passed {
                summary
                    .failures
                    .push("non-negative eigenvector trials failed".into());
            }
            for check in &report.radius_index_grid {
                if !(check.hypotheses_hold && check.radius_equals_index == Some(true)) {
                    summary.failures.push(format!(
                        "radius/index check failed at n={}, r={}",
                        check.order, check.r
                    ));
                }
            }
        }
        summary.lemma_sweeps = Some(report);
    }
    if opts.modes.perturbations {
        let cfg = TrialConfig {
            seed: opts.seed,
            trials_per_kind: opts.trials,
            ..TrialConfig::default()
        };
        let report = perturb::run_trials(&cfg);
        if !report.passed {
            summary.failures.push("perturbation trials failed".into());
        }
        summary.perturbation = Some(report);
    }
    summary.passed = summary.failures.is_empty();
    Ok(summary)
}

/// Switching-isomorphism key of an arbitrary signed graph of order at most
/// 7; equal keys mean switching isomorphic.
pub fn switching_class_key(g: &SignedGraph) -> Result<u64> {
    let n = g.order();
    if !(1..=MAX_ENUM_ORDER).contains(&n) {
        return Err(Error::ParameterRange(format!(
            "class keys support 1 <= n <= {MAX_ENUM_ORDER}, got {n}"
        )));
    }
    let pt = PairTable::new(n);
    let (bits, neg) = encode_graph(&pt, g);
    Ok(class_key(&pt, bits, neg))
}
