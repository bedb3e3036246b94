//! Simulated annealing over base-block tuples.
//!
//! The state is one tuple per planned base block. Cost counts surplus edge
//! coverage plus a penalty for every developed snark edge that lands inside a
//! multipartite part. When the plan balances (orders times snark edges equals
//! host edges), cost zero is exactly an exact decomposition. Any zero-cost
//! state is re-checked with [`verify_design`] before it is reported.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::catalog::SnarkId;
use crate::design::{
    validate_automorphism, verify_design, BaseBlock, DesignRecord, NamedMap, PiecewiseModularMap, VerificationReport,
};
use crate::graph::LabeledGraph;
use crate::host::HostGraph;

/// Cost of one developed snark edge falling on a non-edge of the host.
pub const ILLEGAL_PLACEMENT_PENALTY: u64 = 36;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("plan does not balance: {covered} edge placements for {host_edges} host edges")]
    Unbalanced { covered: u64, host_edges: usize },
    #[error("plan map {0} is not an automorphism of the host")]
    NotAnAutomorphism(usize),
    #[error("host has {host} vertices, blocks need more than {block}")]
    HostTooSmall { host: usize, block: usize },
    #[error("initial candidate does not fit the plan: {0}")]
    BadInitial(String),
    #[error("plan is empty")]
    EmptyPlan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub initial_temperature: f64,
    /// Temperature multiplier applied after every `batch` accepted moves.
    pub cooling: f64,
    pub batch: u64,
    /// Restart after this many consecutive moves without a new run best.
    pub restart_after: u64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { initial_temperature: 3.0, cooling: 0.9995, batch: 100, restart_after: 100_000 }
    }
}

/// One host-vertex tuple per planned base block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub tuples: Vec<Vec<usize>>,
}

impl Candidate {
    pub fn random<R: Rng>(spec: &SearchSpec, rng: &mut R) -> Candidate {
        let k = spec.graph().vertex_count();
        let n = spec.host.vertex_count();
        let tuples = spec.plan.iter().map(|_| sample(rng, n, k).into_vec()).collect();
        Candidate { tuples }
    }

    pub fn with_move(&self, mv: &Move) -> Candidate {
        let mut next = self.clone();
        next.tuples[mv.block][mv.position] = mv.vertex;
        next
    }

    pub fn is_well_formed(&self, vertex_count: usize) -> bool {
        self.tuples.iter().all(|t| {
            let mut seen = vec![false; vertex_count];
            t.iter().all(|&x| x < vertex_count && !std::mem::replace(&mut seen[x], true))
        })
    }
}

/// Replace coordinate `position` of tuple `block` (currently `previous`)
/// with `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub block: usize,
    pub position: usize,
    pub vertex: usize,
    pub previous: usize,
}

impl Move {
    pub fn inverse(self) -> Move {
        Move { vertex: self.previous, previous: self.vertex, ..self }
    }
}

/// Uniform block, uniform coordinate, uniform host vertex not already in
/// that tuple. The host must have more vertices than the tuple length.
pub fn propose_move<R: Rng>(c: &Candidate, vertex_count: usize, rng: &mut R) -> Move {
    let block = rng.random_range(0..c.tuples.len());
    let tuple = &c.tuples[block];
    assert!(vertex_count > tuple.len(), "no free host vertex to move to");
    let position = rng.random_range(0..tuple.len());
    let vertex = loop {
        let v = rng.random_range(0..vertex_count);
        if !tuple.contains(&v) {
            break v;
        }
    };
    Move { block, position, vertex, previous: tuple[position] }
}

/// Everything [`search`] needs: which snark, which host, one map per base
/// block, and the run parameters.
#[derive(Debug, Clone)]
pub struct SearchSpec {
    snark: SnarkId,
    host: HostGraph,
    plan: Vec<PiecewiseModularMap>,
    pub budget: u64,
    pub seed: u64,
    pub schedule: Schedule,
    pub workers: usize,
    initial: Option<Candidate>,
}

impl SearchSpec {
    pub fn new(
        snark: SnarkId,
        host: HostGraph,
        plan: Vec<PiecewiseModularMap>,
        budget: u64,
        seed: u64,
    ) -> Result<SearchSpec, SearchError> {
        if plan.is_empty() {
            return Err(SearchError::EmptyPlan);
        }
        let graph = snark.graph();
        let covered: u64 = plan.iter().map(|m| m.order() * graph.edge_count() as u64).sum();
        if covered != host.edge_count() as u64 {
            return Err(SearchError::Unbalanced { covered, host_edges: host.edge_count() });
        }
        if let Some(i) = plan.iter().position(|m| !validate_automorphism(m, &host)) {
            return Err(SearchError::NotAnAutomorphism(i));
        }
        if host.vertex_count() <= graph.vertex_count() {
            return Err(SearchError::HostTooSmall { host: host.vertex_count(), block: graph.vertex_count() });
        }
        Ok(SearchSpec { snark, host, plan, budget, seed, schedule: Schedule::default(), workers: 1, initial: None })
    }

    /// Plan and starting point taken from an existing record.
    pub fn from_record(record: &DesignRecord, budget: u64, seed: u64) -> Result<SearchSpec, SearchError> {
        let plan = record
            .blocks
            .iter()
            .map(|b| record.map_of(b).cloned().ok_or(SearchError::BadInitial("undeclared map".into())))
            .collect::<Result<Vec<_>, _>>()?;
        let spec = SearchSpec::new(record.snark, record.host.clone(), plan, budget, seed)?;
        spec.with_initial(Candidate { tuples: record.blocks.iter().map(|b| b.tuple.clone()).collect() })
    }

    pub fn with_initial(mut self, initial: Candidate) -> Result<SearchSpec, SearchError> {
        if initial.tuples.len() != self.plan.len() {
            return Err(SearchError::BadInitial(format!(
                "{} tuples for {} planned blocks",
                initial.tuples.len(),
                self.plan.len()
            )));
        }
        let k = self.graph().vertex_count();
        if initial.tuples.iter().any(|t| t.len() != k) || !initial.is_well_formed(self.host.vertex_count()) {
            return Err(SearchError::BadInitial(
                "tuples must hold distinct host vertices, one per snark vertex".into(),
            ));
        }
        self.initial = Some(initial);
        Ok(self)
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> SearchSpec {
        self.schedule = schedule;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> SearchSpec {
        self.workers = workers.max(1);
        self
    }

    pub fn snark(&self) -> SnarkId {
        self.snark
    }

    pub fn graph(&self) -> &'static LabeledGraph {
        self.snark.graph()
    }

    pub fn host(&self) -> &HostGraph {
        &self.host
    }

    pub fn plan(&self) -> &[PiecewiseModularMap] {
        &self.plan
    }

    pub fn initial(&self) -> Option<&Candidate> {
        self.initial.as_ref()
    }

    /// Packages a candidate as a design record. Equal plan maps share a name.
    pub fn to_record(&self, candidate: &Candidate, id: &str) -> DesignRecord {
        let mut maps: Vec<NamedMap> = Vec::new();
        let mut blocks = Vec::new();
        for (map, tuple) in self.plan.iter().zip(&candidate.tuples) {
            let index = match maps.iter().position(|m| m.map == *map) {
                Some(i) => i,
                None => {
                    maps.push(NamedMap { name: map_name(maps.len()), map: map.clone() });
                    maps.len() - 1
                }
            };
            blocks.push(BaseBlock { tuple: tuple.clone(), map: index });
        }
        DesignRecord { id: id.to_string(), snark: self.snark, host: self.host.clone(), maps, blocks }
    }
}

fn map_name(i: usize) -> String {
    let letters = b"abcdefghijklmnopqrstuvwxyz";
    if i < letters.len() {
        (letters[i] as char).to_string()
    } else {
        format!("m{i}")
    }
}

/// Full recomputation of the cost.
pub fn cost_of(c: &Candidate, spec: &SearchSpec) -> u64 {
    CostState::new(spec, c.clone()).cost()
}

/// Coverage counts for a candidate, updated move by move.
#[derive(Debug, Clone)]
pub struct CostState<'a> {
    spec: &'a SearchSpec,
    candidate: Candidate,
    coverage: Vec<u32>,
    overlap: u64,
    illegal: u64,
}

impl<'a> CostState<'a> {
    pub fn new(spec: &'a SearchSpec, candidate: Candidate) -> CostState<'a> {
        let mut state =
            CostState { spec, candidate, coverage: vec![0; spec.host.edge_count()], overlap: 0, illegal: 0 };
        let graph = spec.graph();
        for (b, map) in spec.plan.iter().enumerate() {
            let mut current = state.candidate.tuples[b].clone();
            for _ in 0..map.order() {
                for &(i, j) in graph.edges() {
                    state.add(current[i], current[j]);
                }
                for x in current.iter_mut() {
                    *x = map.apply(*x);
                }
            }
        }
        state
    }

    pub fn cost(&self) -> u64 {
        self.overlap + ILLEGAL_PLACEMENT_PENALTY * self.illegal
    }

    pub fn candidate(&self) -> &Candidate {
        &self.candidate
    }

    #[inline]
    fn add(&mut self, x: usize, y: usize) {
        match self.spec.host.index_unchecked(x, y) {
            Some(idx) => {
                if self.coverage[idx] >= 1 {
                    self.overlap += 1;
                }
                self.coverage[idx] += 1;
            }
            None => self.illegal += 1,
        }
    }

    #[inline]
    fn remove(&mut self, x: usize, y: usize) {
        match self.spec.host.index_unchecked(x, y) {
            Some(idx) => {
                self.coverage[idx] -= 1;
                if self.coverage[idx] >= 1 {
                    self.overlap -= 1;
                }
            }
            None => self.illegal -= 1,
        }
    }

    // Orbit of the snark edges at one coordinate, added or removed.
    fn touch(&mut self, block: usize, position: usize, adding: bool) {
        let map = &self.spec.plan[block];
        let graph = self.spec.graph();
        let tuple = &self.candidate.tuples[block];
        let moved = tuple[position];
        let ends: Vec<usize> = graph.neighbors(position).iter().map(|&q| tuple[q]).collect();
        for end in ends {
            let (mut x, mut y) = (moved, end);
            for _ in 0..map.order() {
                if adding {
                    self.add(x, y);
                } else {
                    self.remove(x, y);
                }
                x = map.apply(x);
                y = map.apply(y);
            }
        }
    }

    /// Applies a move and returns the new cost. Only the snark edges at the
    /// moved coordinate are re-developed.
    pub fn apply(&mut self, mv: &Move) -> u64 {
        debug_assert_eq!(self.candidate.tuples[mv.block][mv.position], mv.previous);
        self.touch(mv.block, mv.position, false);
        self.candidate.tuples[mv.block][mv.position] = mv.vertex;
        self.touch(mv.block, mv.position, true);
        self.cost()
    }
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)] // returned once per search
pub enum SearchOutcome {
    Found { candidate: Candidate, record: DesignRecord, report: VerificationReport, evaluations: u64 },
    Exhausted { best_cost: u64, best: Candidate, evaluations: u64 },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

/// Runs annealing with restarts. With one worker the run is a pure function
/// of the spec; with several, worker `w` draws from stream `w` of the seed
/// and the first success stops the others.
pub fn search(spec: &SearchSpec) -> SearchOutcome {
    if spec.workers <= 1 {
        let mut rng = worker_rng(spec.seed, 0);
        return anneal(spec, &mut rng, spec.budget, &AtomicBool::new(false));
    }
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel();
    let share = spec.budget / spec.workers as u64;
    let extra = spec.budget % spec.workers as u64;
    std::thread::scope(|scope| {
        for w in 0..spec.workers {
            let tx = tx.clone();
            let stop = &stop;
            let budget = share + u64::from((w as u64) < extra);
            scope.spawn(move || {
                let mut rng = worker_rng(spec.seed, w as u64);
                let outcome = anneal(spec, &mut rng, budget, stop);
                if outcome.is_found() {
                    stop.store(true, Ordering::Relaxed);
                }
                let _ = tx.send((w, outcome));
            });
        }
    });
    drop(tx);

    let mut results: Vec<(usize, SearchOutcome)> = rx.into_iter().collect();
    results.sort_by_key(|(w, _)| *w);
    let total: u64 = results
        .iter()
        .map(|(_, o)| match o {
            SearchOutcome::Found { evaluations, .. } | SearchOutcome::Exhausted { evaluations, .. } => *evaluations,
        })
        .sum();
    let mut best: Option<SearchOutcome> = None;
    for (_, outcome) in results {
        best = match (best, outcome) {
            (Some(found @ SearchOutcome::Found { .. }), _) => Some(found),
            (_, found @ SearchOutcome::Found { .. }) => Some(found),
            (
                Some(SearchOutcome::Exhausted { best_cost: a, best: ca, .. }),
                SearchOutcome::Exhausted { best_cost: b, best: cb, .. },
            ) => Some(if b < a { exhausted(b, cb, 0) } else { exhausted(a, ca, 0) }),
            (None, other) => Some(other),
        };
    }
    match best.expect("at least one worker") {
        SearchOutcome::Found { candidate, record, report, .. } => {
            SearchOutcome::Found { candidate, record, report, evaluations: total }
        }
        SearchOutcome::Exhausted { best_cost, best, .. } => exhausted(best_cost, best, total),
    }
}

fn exhausted(best_cost: u64, best: Candidate, evaluations: u64) -> SearchOutcome {
    SearchOutcome::Exhausted { best_cost, best, evaluations }
}

fn worker_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn anneal(spec: &SearchSpec, rng: &mut ChaCha8Rng, budget: u64, stop: &AtomicBool) -> SearchOutcome {
    let schedule = spec.schedule;
    let n = spec.host.vertex_count();
    let fresh = |rng: &mut ChaCha8Rng| spec.initial.clone().unwrap_or_else(|| Candidate::random(spec, rng));

    let mut state = CostState::new(spec, fresh(rng));
    let mut best_cost = state.cost();
    let mut best = state.candidate.clone();
    let mut run_best = best_cost;
    let mut temperature = schedule.initial_temperature;
    let mut accepted = 0u64;
    let mut stale = 0u64;
    let mut evaluations = 0u64;

    loop {
        if state.cost() == 0 {
            let record = spec.to_record(&state.candidate, &format!("search-{}-seed{}", spec.snark, spec.seed));
            let report = verify_design(&record);
            if report.pass {
                return SearchOutcome::Found { candidate: state.candidate.clone(), record, report, evaluations };
            }
            debug_assert!(false, "zero cost without a passing verification");
            stale = schedule.restart_after;
        }
        if evaluations >= budget || (evaluations.is_multiple_of(1024) && stop.load(Ordering::Relaxed)) {
            return exhausted(best_cost, best, evaluations);
        }
        if stale >= schedule.restart_after {
            state = CostState::new(spec, fresh(rng));
            temperature = schedule.initial_temperature;
            run_best = state.cost();
            stale = 0;
            continue;
        }

        let mv = propose_move(&state.candidate, n, rng);
        evaluations += 1;
        let before = state.cost();
        let after = state.apply(&mv);
        let delta = after as f64 - before as f64;
        let accept = after <= before || rng.random::<f64>() < (-delta / temperature).exp();
        if accept {
            accepted += 1;
            if accepted.is_multiple_of(schedule.batch.max(1)) {
                temperature *= schedule.cooling;
            }
        } else {
            state.apply(&mv.inverse());
        }

        if state.cost() < run_best {
            run_best = state.cost();
            stale = 0;
            if run_best < best_cost {
                best_cost = run_best;
                best = state.candidate.clone();
            }
        } else {
            stale += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::LayoutId;

    fn k12x3_spec(budget: u64, seed: u64) -> SearchSpec {
        SearchSpec::new(
            SnarkId::new(1).unwrap(),
            HostGraph::named(LayoutId::K12x3),
            vec![PiecewiseModularMap::cyclic(36, 3)],
            budget,
            seed,
        )
        .unwrap()
    }

    const G1_K12X3: [usize; 24] =
        [0, 1, 2, 4, 3, 5, 10, 6, 11, 9, 19, 20, 29, 13, 27, 7, 15, 30, 17, 18, 28, 35, 16, 23];

    #[test]
    fn unbalanced_plans_are_rejected() {
        let err = SearchSpec::new(
            SnarkId::new(1).unwrap(),
            HostGraph::named(LayoutId::K12x3),
            vec![PiecewiseModularMap::cyclic(36, 1)],
            10,
            0,
        )
        .unwrap_err();
        assert_eq!(err, SearchError::Unbalanced { covered: 36 * 36, host_edges: 432 });
        assert_eq!(
            SearchSpec::new(SnarkId::new(1).unwrap(), HostGraph::named(LayoutId::K12x3), vec![], 1, 0).unwrap_err(),
            SearchError::EmptyPlan
        );
    }

    #[test]
    fn known_solution_costs_zero() {
        let spec = k12x3_spec(0, 0);
        let c = Candidate { tuples: vec![G1_K12X3.to_vec()] };
        assert_eq!(cost_of(&c, &spec), 0);
    }

    #[test]
    fn same_part_edge_is_penalized() {
        let spec = k12x3_spec(0, 0);
        let mut t = G1_K12X3.to_vec();
        // snark edge {0,1} now joins 0 and 3, both in part 0
        t[1] = 3;
        t[4] = 1;
        assert!(cost_of(&Candidate { tuples: vec![t] }, &spec) >= ILLEGAL_PLACEMENT_PENALTY);
    }

    #[test]
    fn moves_keep_tuples_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut c = Candidate { tuples: vec![G1_K12X3.to_vec()] };
        for _ in 0..10_000 {
            let mv = propose_move(&c, 36, &mut rng);
            let next = c.with_move(&mv);
            let differing = c.tuples[0].iter().zip(&next.tuples[0]).filter(|(a, b)| a != b).count();
            assert_eq!(differing, 1);
            c = next;
            assert!(c.is_well_formed(36));
        }
    }

    #[test]
    fn move_then_inverse_restores_cost() {
        let spec = k12x3_spec(0, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let start = Candidate::random(&spec, &mut rng);
        let mut state = CostState::new(&spec, start.clone());
        let before = state.cost();
        let mv = propose_move(&start, 36, &mut rng);
        state.apply(&mv);
        assert_eq!(state.apply(&mv.inverse()), before);
        assert_eq!(state.candidate(), &start);
    }

    #[test]
    fn single_worker_is_reproducible() {
        let spec = k12x3_spec(20_000, 11);
        let a = search(&spec);
        let b = search(&spec);
        match (a, b) {
            (
                SearchOutcome::Exhausted { best_cost: x, best: bx, .. },
                SearchOutcome::Exhausted { best_cost: y, best: by, .. },
            ) => {
                assert_eq!((x, bx), (y, by));
            }
            (SearchOutcome::Found { candidate: x, .. }, SearchOutcome::Found { candidate: y, .. }) => assert_eq!(x, y),
            _ => panic!("runs diverged"),
        }
    }
}
