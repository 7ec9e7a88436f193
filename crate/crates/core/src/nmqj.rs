//! Non-Markovian quantum jump unravelling at zero temperature.
//!
//! Each ensemble member carries a pure state that evolves under the
//! non-Hermitian generator `d|ψ⟩/dt = −β(t) N |ψ⟩` (N the total photon
//! number) and jumps through `a_j` with probability `γ(t)⟨a_j†a_j⟩dt` while
//! γ = κ(t) > 0. While γ < 0 a member may undo its most recent jump, moving
//! back to the state it would hold without that jump, with probability
//! `(N_source/N_self) |γ| ⟨a_j†a_j⟩_source dt`.
//!
//! Because N is diagonal and every jump lowers it by one, the state of a
//! member depends only on the ordered list of channels it jumped through.
//! Members are therefore grouped by that list, and each group's state is
//! propagated once per step.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{DynamicsError, EvolutionConfig};
use crate::hilbert::{occupation, DensityMatrix, Operator, PureState, DIM};
use crate::rates::Coefficients;

/// Per-step jump probability above which a warning is logged.
pub const PROBABILITY_WARNING: f64 = 0.1;
/// Squared norm below which a propagated state is considered lost.
pub const NORM_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum NmqjError {
    #[error("jump unravelling needs a zero-temperature bath (α(t) = {0} at t = {1})")]
    Thermal(Complex64, f64),
    #[error("jump unravelling does not support photon hopping")]
    Hopping,
    #[error("ensemble needs at least one trajectory")]
    EmptyEnsemble,
    #[error("positive jump requested while the rate is {0}")]
    NegativeRate(f64),
    #[error("state is annihilated by channel {0}")]
    AnnihilatedByChannel(usize),
    #[error("no earlier jump to reverse")]
    NoAncestor,
    #[error("state norm collapsed to {0:e}")]
    NormCollapse(f64),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// One step of `d|ψ⟩/dt = −β(t) N |ψ⟩` by RK4, given β at the start, middle
/// and end of the step. The result is not normalised.
pub fn nonhermitian_step(
    state: &[Complex64; DIM],
    betas: [Complex64; 3],
    dt: f64,
) -> [Complex64; DIM] {
    let [b0, bh, b1] = betas;
    core::array::from_fn(|n| {
        let photons = (0..3).map(|c| occupation(c, n)).sum::<f64>();
        let f = |b: Complex64, y: Complex64| -b * photons * y;
        let y = state[n];
        let k1 = f(b0, y);
        let k2 = f(bh, y + k1 * (0.5 * dt));
        let k3 = f(bh, y + k2 * (0.5 * dt));
        let k4 = f(b1, y + k3 * dt);
        y + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0)
    })
}

/// `γ⟨a_c†a_c⟩dt` for 0-based channel c.
pub fn positive_jump_probability(
    state: &PureState,
    channel: usize,
    gamma: f64,
    dt: f64,
) -> Result<f64, NmqjError> {
    if gamma < 0.0 {
        return Err(NmqjError::NegativeRate(gamma));
    }
    let p = gamma * state.occupation(channel) * dt;
    if p > PROBABILITY_WARNING {
        log::warn!("jump probability {p} per step; reduce dt");
    }
    Ok(p)
}

/// `(N_source/N_self)|γ|⟨a_c†a_c⟩_source dt`; zero when the source group is
/// empty.
pub fn negative_jump_probability(
    source: &PureState,
    source_count: usize,
    own_count: usize,
    channel: usize,
    gamma: f64,
    dt: f64,
) -> f64 {
    if source_count == 0 || own_count == 0 {
        return 0.0;
    }
    source_count as f64 / own_count as f64 * gamma.abs() * source.occupation(channel) * dt
}

/// A single jump record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jump {
    pub time: f64,
    pub channel: usize,
}

/// One ensemble member with its own jump history.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub state: PureState,
    pub history: Vec<Jump>,
}

impl Trajectory {
    pub fn new(state: PureState) -> Self {
        Self {
            state,
            history: Vec::new(),
        }
    }

    /// `|ψ⟩ → a_c|ψ⟩/‖a_c|ψ⟩‖`.
    pub fn apply_positive_jump(&mut self, channel: usize, time: f64) -> Result<(), NmqjError> {
        self.state = self
            .state
            .lowered(channel)
            .ok_or(NmqjError::AnnihilatedByChannel(channel))?;
        self.history.push(Jump { time, channel });
        Ok(())
    }

    /// Returns to `source`, the state the member would hold without its
    /// latest jump, and forgets that jump.
    pub fn apply_negative_jump(&mut self, source: PureState) -> Result<Jump, NmqjError> {
        let undone = self.history.pop().ok_or(NmqjError::NoAncestor)?;
        self.state = source;
        Ok(undone)
    }
}

/// Groups of members sharing a jump sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSnapshot {
    /// (channel sequence, state, member count), ordered by sequence.
    pub groups: Vec<(Vec<u8>, PureState, usize)>,
    pub total: usize,
}

/// Sampled output of an ensemble run.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EnsembleRun {
    pub times: Vec<f64>,
    /// Ensemble-averaged ρ at each sample.
    pub states: Vec<DensityMatrix>,
    /// Jumps in the sampling interval ending at each sample.
    pub positive_jumps: Vec<u64>,
    pub negative_jumps: Vec<u64>,
    /// Largest per-step jump probability met.
    pub max_probability: f64,
}

struct Group {
    sequence: Vec<u8>,
    state: PureState,
}

struct Member {
    group: usize,
    rng: ChaCha8Rng,
}

enum Move {
    Stay,
    Forward(u8),
    Back,
}

// Jump probabilities of one group for the current step.
enum Odds {
    None,
    Forward([f64; 3]),
    Back(f64),
}

/// Trajectory ensemble with shared group bookkeeping.
pub struct Ensemble {
    groups: Vec<Group>,
    index: BTreeMap<Vec<u8>, usize>,
    members: Vec<Member>,
}

impl core::fmt::Debug for Ensemble {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Ensemble")
            .field("groups", &self.groups.len())
            .field("members", &self.members.len())
            .finish()
    }
}

impl Ensemble {
    /// `n` members in `initial`; member i draws from stream i of a ChaCha8
    /// generator seeded with `seed`.
    pub fn new(initial: PureState, n: usize, seed: u64) -> Result<Self, NmqjError> {
        if n == 0 {
            return Err(NmqjError::EmptyEnsemble);
        }
        let members = (0..n)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                Member { group: 0, rng }
            })
            .collect();
        let mut index = BTreeMap::new();
        index.insert(Vec::new(), 0);
        Ok(Self {
            groups: alloc::vec![Group {
                sequence: Vec::new(),
                state: initial
            }],
            index,
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0usize; self.groups.len()];
        for m in &self.members {
            counts[m.group] += 1;
        }
        counts
    }

    pub fn snapshot(&self) -> EnsembleSnapshot {
        let counts = self.counts();
        let groups = self
            .index
            .iter()
            .map(|(seq, &g)| (seq.clone(), self.groups[g].state, counts[g]))
            .collect();
        EnsembleSnapshot {
            groups,
            total: self.members.len(),
        }
    }

    /// `(1/N) Σ |ψ⟩⟨ψ|`.
    pub fn density_matrix(&self) -> DensityMatrix {
        let counts = self.counts();
        let n = self.members.len() as f64;
        let mut rho = Operator::zero();
        for (g, group) in self.groups.iter().enumerate() {
            if counts[g] == 0 {
                continue;
            }
            let w = counts[g] as f64 / n;
            let a = group.state.amplitudes();
            for i in 0..DIM {
                for j in 0..DIM {
                    rho.0[i][j] += a[i] * a[j].conj() * w;
                }
            }
        }
        DensityMatrix(rho)
    }

    fn odds(&self, counts: &[usize], gamma: f64, dt: f64) -> Vec<Odds> {
        self.groups
            .iter()
            .enumerate()
            .map(|(g, group)| {
                if counts[g] == 0 || gamma == 0.0 {
                    Odds::None
                } else if gamma > 0.0 {
                    let mut cumulative = [0.0; 3];
                    let mut acc = 0.0;
                    for (c, slot) in cumulative.iter_mut().enumerate() {
                        acc += gamma * group.state.occupation(c) * dt;
                        *slot = acc;
                    }
                    Odds::Forward(cumulative)
                } else {
                    let Some((&channel, parent)) = group.sequence.split_last() else {
                        return Odds::None;
                    };
                    let Some(&p) = self.index.get(parent) else {
                        return Odds::None;
                    };
                    Odds::Back(negative_jump_probability(
                        &self.groups[p].state,
                        counts[p],
                        counts[g],
                        channel as usize,
                        gamma,
                        dt,
                    ))
                }
            })
            .collect()
    }

    /// Advances every member by one step of length `dt` starting at `t`.
    /// Returns (positive jumps, negative jumps, largest probability).
    pub fn step<C: Coefficients + ?Sized>(
        &mut self,
        coefficients: &C,
        t: f64,
        dt: f64,
    ) -> Result<(u64, u64, f64), NmqjError> {
        let (alpha, beta0) = coefficients.alpha_beta(t);
        if alpha != Complex64::new(0.0, 0.0) {
            return Err(NmqjError::Thermal(alpha, t));
        }
        let gamma = 2.0 * beta0.re;
        let counts = self.counts();
        let odds = self.odds(&counts, gamma, dt);
        let max_probability = odds
            .iter()
            .map(|o| match o {
                Odds::None => 0.0,
                Odds::Forward(c) => c[2],
                Odds::Back(p) => *p,
            })
            .fold(0.0, f64::max);
        if max_probability > PROBABILITY_WARNING {
            log::warn!("jump probability {max_probability} per step at t = {t}; reduce dt");
        }

        let decide = |m: &mut Member| -> Move {
            match &odds[m.group] {
                Odds::None => Move::Stay,
                Odds::Forward(cumulative) => {
                    let u: f64 = m.rng.random();
                    cumulative
                        .iter()
                        .position(|&c| u < c)
                        .map_or(Move::Stay, |c| Move::Forward(c as u8))
                }
                Odds::Back(p) => {
                    let u: f64 = m.rng.random();
                    if u < *p {
                        Move::Back
                    } else {
                        Move::Stay
                    }
                }
            }
        };
        #[cfg(feature = "parallel")]
        let moves: Vec<Move> = {
            use rayon::prelude::*;
            self.members.par_iter_mut().map(decide).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let moves: Vec<Move> = self.members.iter_mut().map(decide).collect();

        let (mut positive, mut negative) = (0u64, 0u64);
        for (i, mv) in moves.into_iter().enumerate() {
            let from = self.members[i].group;
            match mv {
                Move::Stay => {}
                Move::Forward(c) => {
                    debug_assert!(gamma > 0.0);
                    let mut sequence = self.groups[from].sequence.clone();
                    sequence.push(c);
                    let target = match self.index.get(&sequence) {
                        Some(&g) => g,
                        None => {
                            let state = self.groups[from]
                                .state
                                .lowered(c as usize)
                                .ok_or(NmqjError::AnnihilatedByChannel(c as usize))?;
                            self.groups.push(Group {
                                sequence: sequence.clone(),
                                state,
                            });
                            self.index.insert(sequence, self.groups.len() - 1);
                            self.groups.len() - 1
                        }
                    };
                    self.members[i].group = target;
                    positive += 1;
                }
                Move::Back => {
                    debug_assert!(gamma < 0.0);
                    let parent =
                        &self.groups[from].sequence[..self.groups[from].sequence.len() - 1];
                    self.members[i].group = *self.index.get(parent).ok_or(NmqjError::NoAncestor)?;
                    negative += 1;
                }
            }
        }

        let betas = [
            beta0,
            coefficients.alpha_beta(t + 0.5 * dt).1,
            coefficients.alpha_beta(t + dt).1,
        ];
        for group in &mut self.groups {
            let next = nonhermitian_step(group.state.amplitudes(), betas, dt);
            *group.state.amplitudes_mut() = next;
            let norm = group.state.norm_sqr();
            if !(norm > NORM_FLOOR) {
                return Err(NmqjError::NormCollapse(norm));
            }
            group.state.normalize();
        }
        self.prune();
        Ok((positive, negative, max_probability))
    }

    fn prune(&mut self) {
        let counts = self.counts();
        if counts.iter().all(|&c| c > 0) {
            return;
        }
        let mut remap = alloc::vec![usize::MAX; self.groups.len()];
        let mut kept = Vec::new();
        for (g, group) in core::mem::take(&mut self.groups).into_iter().enumerate() {
            if counts[g] > 0 {
                remap[g] = kept.len();
                kept.push(group);
            }
        }
        self.groups = kept;
        self.index = self
            .groups
            .iter()
            .enumerate()
            .map(|(g, group)| (group.sequence.clone(), g))
            .collect();
        for m in &mut self.members {
            m.group = remap[m.group];
        }
    }
}

/// Runs `n_traj` members from the configured initial state and returns the
/// ensemble-averaged density matrix at every sample time.
pub fn run_ensemble<C: Coefficients + ?Sized>(
    config: &EvolutionConfig,
    coefficients: &C,
    n_traj: usize,
    seed: u64,
) -> Result<EnsembleRun, NmqjError> {
    Ok(run_ensemble_with_snapshot(config, coefficients, n_traj, seed)?.0)
}

/// As [`run_ensemble`], also returning the final group structure.
pub fn run_ensemble_with_snapshot<C: Coefficients + ?Sized>(
    config: &EvolutionConfig,
    coefficients: &C,
    n_traj: usize,
    seed: u64,
) -> Result<(EnsembleRun, EnsembleSnapshot), NmqjError> {
    config.validate()?;
    if !config.hopping.is_zero() {
        return Err(NmqjError::Hopping);
    }
    let initial = match config.initial {
        crate::dynamics::Initial::State(kind) => kind.pure(),
        crate::dynamics::Initial::Matrix(rho) => pure_from_rank_one(&rho)?,
    };
    let mut ensemble = Ensemble::new(initial, n_traj, seed)?;
    let mut run = EnsembleRun::default();
    run.times.push(0.0);
    run.states.push(ensemble.density_matrix());
    run.positive_jumps.push(0);
    run.negative_jumps.push(0);
    let (mut positive, mut negative) = (0u64, 0u64);
    let steps = config.steps();
    for step in 0..steps {
        let t = step as f64 * config.dt;
        let (p, n, max_p) = ensemble.step(coefficients, t, config.dt)?;
        positive += p;
        negative += n;
        run.max_probability = run.max_probability.max(max_p);
        if (step + 1) % config.sample_every == 0 || step + 1 == steps {
            run.times.push((step + 1) as f64 * config.dt);
            run.states.push(ensemble.density_matrix());
            run.positive_jumps.push(core::mem::take(&mut positive));
            run.negative_jumps.push(core::mem::take(&mut negative));
        }
    }
    Ok((run, ensemble.snapshot()))
}

// The amplitudes of a pure ρ, read off its largest diagonal entry's column.
fn pure_from_rank_one(rho: &DensityMatrix) -> Result<PureState, NmqjError> {
    let m = &rho.0 .0;
    let k = (0..DIM)
        .max_by(|&a, &b| m[a][a].re.total_cmp(&m[b][b].re))
        .unwrap_or(0);
    let pivot = m[k][k].re;
    if !(pivot > NORM_FLOOR) {
        return Err(NmqjError::NormCollapse(pivot));
    }
    let column: [Complex64; DIM] = core::array::from_fn(|i| m[i][k] / pivot.sqrt());
    PureState::new(column).ok_or(NmqjError::NormCollapse(0.0))
}
