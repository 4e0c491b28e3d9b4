//! Single-site Metropolis chains over the canonical measure `exp(-H)`.
//!
//! One step is a sweep over all bodies; each body gets a Gaussian move of its radial
//! deviation and a uniform move of its angle. Chain `c` draws from ChaCha8 seeded with the
//! master seed and switched to stream `c`, so results do not depend on how chains are
//! scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::stats::{pooled_error, BatchMeans, BATCHES};
use crate::error::{Error, Result};
use crate::model::{wrap_angle, Configuration, GibbsModel, StarSystem};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct ChainSettings {
    /// Sweeps per chain, burn-in included.
    pub steps: u64,
    pub burn_in: u64,
    /// Record every `thinning`-th sweep after burn-in.
    pub thinning: u64,
    /// Radial proposal width in units of `1 / gamma_i`; adapted during burn-in only.
    pub proposal_sigma_xi: f64,
    pub seed: u64,
    pub n_chains: usize,
}

impl Default for ChainSettings {
    fn default() -> Self {
        Self {
            steps: 200_000,
            burn_in: 20_000,
            thinning: 1,
            proposal_sigma_xi: 2.4,
            seed: 0,
            n_chains: 4,
        }
    }
}

/// Target acceptance rate of the radial moves while adapting.
pub const TARGET_ACCEPTANCE: f64 = 0.4;
const ADAPT_WINDOW: u64 = 50;

impl ChainSettings {
    pub fn validate(&self) -> Result<()> {
        if self.steps <= self.burn_in {
            return Err(Error::invalid(
                "steps",
                format!("{} sweeps do not exceed the burn-in of {}", self.steps, self.burn_in),
            ));
        }
        if self.thinning == 0 {
            return Err(Error::invalid("thinning", "must be at least 1"));
        }
        if !(self.proposal_sigma_xi > 0.0 && self.proposal_sigma_xi.is_finite()) {
            return Err(Error::invalid(
                "proposal_sigma_xi",
                format!("must be positive, got {}", self.proposal_sigma_xi),
            ));
        }
        if self.n_chains == 0 {
            return Err(Error::invalid("n_chains", "need at least one chain"));
        }
        if self.recorded() < BATCHES as u64 {
            return Err(Error::invalid(
                "steps",
                format!("{} recorded sweeps, need at least {BATCHES}", self.recorded()),
            ));
        }
        Ok(())
    }

    fn recorded(&self) -> u64 {
        (self.steps - self.burn_in) / self.thinning
    }
}

/// Merged statistics of all chains. Per-body vectors are indexed by body.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleStats<T> {
    pub chains: usize,
    /// Recorded sweeps per chain that enter the estimates.
    pub samples_per_chain: u64,
    pub mean_xi: Vec<T>,
    pub mean_xi_se: Vec<T>,
    pub variance_xi: Vec<T>,
    /// `<xi_i^2>`.
    pub second_moment: Vec<T>,
    pub second_moment_se: Vec<T>,
    /// Integrated autocorrelation time of `xi_i^2`, in recorded sweeps.
    pub autocorrelation_time: Vec<T>,
    /// Accepted over proposed moves after burn-in.
    pub acceptance_rate: T,
    /// Proposals rejected for overlapping another body.
    pub hard_core_rejections: u64,
    /// Proposals rejected for leaving the free-measure support.
    pub support_rejections: u64,
    /// Radial proposal widths in units of `1 / gamma_i` after adaptation, averaged over chains.
    pub proposal_scale: Vec<T>,
    /// Every autocorrelation time is finite and below `(steps - burn_in) / 1000`.
    pub converged: bool,
}

impl<T: Scalar> SampleStats<T> {
    pub fn n_bodies(&self) -> usize {
        self.second_moment.len()
    }
}

/// Metropolis rule: accept when `u < exp(-delta_h)`, `u` uniform on `[0, 1)`.
#[inline]
pub fn metropolis_accept<T: Scalar>(delta_h: T, u: T) -> bool {
    delta_h <= T::zero() || u < (-delta_h).exp()
}

struct ChainOutput {
    linear: Vec<BatchMeans>,
    square: Vec<BatchMeans>,
    accepted: u64,
    proposed: u64,
    hard_core: u64,
    support: u64,
    scales: Vec<f64>,
}

fn chain_rng(seed: u64, chain: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    rng
}

fn run_chain<T: Scalar>(
    model: &GibbsModel<T>,
    settings: &ChainSettings,
    chain: usize,
    start: &Configuration<T>,
) -> Result<ChainOutput> {
    let n = model.n();
    let mut rng = chain_rng(settings.seed, chain);
    let mut config = start.clone();
    let gammas = model.gammas();
    let mut scale = vec![settings.proposal_sigma_xi; n];
    let mut window_accepts = vec![0u64; n];

    let recorded = settings.recorded();
    let batch = (recorded / BATCHES as u64) as usize;
    let used = (batch * BATCHES) as u64;
    let mut linear: Vec<_> = (0..n).map(|_| BatchMeans::new(batch)).collect();
    let mut square: Vec<_> = (0..n).map(|_| BatchMeans::new(batch)).collect();

    let (mut accepted, mut proposed, mut hard_core, mut support) = (0u64, 0u64, 0u64, 0u64);
    let mut burn_accepted = 0u64;
    let mut kept = 0u64;

    for sweep in 0..settings.steps {
        let burning = sweep < settings.burn_in;
        for i in 0..n {
            let xi = config.xi()[i];
            let theta = config.theta()[i];
            let current = model
                .local_attraction(i, xi, theta, &config)
                .expect("the chain state satisfies the hard core");

            // radial move
            let step = T::of(scale[i]) / gammas[i] * T::sample_normal(&mut rng);
            let xi_new = xi + step;
            let u = T::sample_unit(&mut rng);
            let mut xi_now = xi;
            let mut attraction_now = current;
            if !burning {
                proposed += 1;
            }
            if !model.in_support(i, xi_new) {
                support += u64::from(!burning);
            } else if let Some(attraction) = model.local_attraction(i, xi_new, theta, &config) {
                let dh = model.one_body_energy(i, xi_new) - model.one_body_energy(i, xi) - (attraction - current);
                if metropolis_accept(dh, u) {
                    config.set(i, xi_new, theta);
                    debug_assert!(model.hard_core_ok(&config));
                    xi_now = xi_new;
                    attraction_now = attraction;
                    if burning {
                        window_accepts[i] += 1;
                        burn_accepted += 1;
                    } else {
                        accepted += 1;
                    }
                }
            } else {
                hard_core += u64::from(!burning);
            }

            // angular move
            let shift = (T::of(2.0) * T::sample_unit(&mut rng) - T::one()) * T::PI();
            let theta_new = wrap_angle(theta + shift);
            let u = T::sample_unit(&mut rng);
            if !burning {
                proposed += 1;
            }
            match model.local_attraction(i, xi_now, theta_new, &config) {
                Some(attraction) => {
                    if metropolis_accept(attraction_now - attraction, u) {
                        config.set(i, xi_now, theta_new);
                        debug_assert!(model.hard_core_ok(&config));
                        if burning {
                            burn_accepted += 1;
                        } else {
                            accepted += 1;
                        }
                    }
                }
                None => hard_core += u64::from(!burning),
            }
        }

        if burning && (sweep + 1) % ADAPT_WINDOW == 0 {
            for i in 0..n {
                let rate = window_accepts[i] as f64 / ADAPT_WINDOW as f64;
                scale[i] = (scale[i] * (2.0 * (rate - TARGET_ACCEPTANCE)).exp())
                    .clamp(settings.proposal_sigma_xi * 1e-3, settings.proposal_sigma_xi * 1e3);
                window_accepts[i] = 0;
            }
        }
        if sweep + 1 == settings.burn_in && burn_accepted == 0 {
            return Err(Error::Sampler(format!(
                "chain {chain}: no move accepted during {} burn-in sweeps",
                settings.burn_in
            )));
        }
        if !burning && (sweep + 1 - settings.burn_in).is_multiple_of(settings.thinning) && kept < used {
            kept += 1;
            for i in 0..n {
                let x = config.xi()[i].to_f64_lossy();
                linear[i].push(x);
                square[i].push(x * x);
            }
        }
    }
    Ok(ChainOutput {
        linear,
        square,
        accepted,
        proposed,
        hard_core,
        support,
        scales: scale,
    })
}

/// Runs the chains on the system's canonical measure from the default start
/// (`xi = 0`, equally spaced angles).
pub fn metropolis_run<T: Scalar>(system: &StarSystem<T>, settings: &ChainSettings) -> Result<SampleStats<T>> {
    metropolis_run_model(&system.gibbs_model(), settings)
}

pub fn metropolis_run_model<T: Scalar>(model: &GibbsModel<T>, settings: &ChainSettings) -> Result<SampleStats<T>> {
    metropolis_run_from(model, settings, &Configuration::circular(model.n()))
}

/// Runs every chain from `start`, which must be feasible.
pub fn metropolis_run_from<T: Scalar>(
    model: &GibbsModel<T>,
    settings: &ChainSettings,
    start: &Configuration<T>,
) -> Result<SampleStats<T>> {
    settings.validate()?;
    if model.n() == 0 {
        return Err(Error::Sampler("no bodies to sample".into()));
    }
    model.hamiltonian(start)?;

    let outputs: Vec<ChainOutput> = (0..settings.n_chains)
        .into_par_iter()
        .map(|c| run_chain(model, settings, c, start))
        .collect::<Result<_>>()?;

    let n = model.n();
    let chains = outputs.len();
    let measured = settings.steps - settings.burn_in;
    let mut stats = SampleStats {
        chains,
        samples_per_chain: outputs[0].square[0].count() as u64,
        mean_xi: Vec::with_capacity(n),
        mean_xi_se: Vec::with_capacity(n),
        variance_xi: Vec::with_capacity(n),
        second_moment: Vec::with_capacity(n),
        second_moment_se: Vec::with_capacity(n),
        autocorrelation_time: Vec::with_capacity(n),
        acceptance_rate: T::zero(),
        hard_core_rejections: outputs.iter().map(|o| o.hard_core).sum(),
        support_rejections: outputs.iter().map(|o| o.support).sum(),
        proposal_scale: Vec::with_capacity(n),
        converged: true,
    };
    let accepted: u64 = outputs.iter().map(|o| o.accepted).sum();
    let proposed: u64 = outputs.iter().map(|o| o.proposed).sum();
    stats.acceptance_rate = T::of(accepted as f64 / proposed.max(1) as f64);

    for i in 0..n {
        let lin: Vec<&BatchMeans> = outputs.iter().map(|o| &o.linear[i]).collect();
        let sq: Vec<&BatchMeans> = outputs.iter().map(|o| &o.square[i]).collect();
        let mean = lin.iter().map(|b| b.mean()).sum::<f64>() / chains as f64;
        let second = sq.iter().map(|b| b.mean()).sum::<f64>() / chains as f64;
        let (mean_se, tau_lin) = pooled_error(&lin);
        let (second_se, tau_sq) = pooled_error(&sq);
        let tau = tau_lin.max(tau_sq);
        if !(tau.is_finite() && tau < measured as f64 / 1000.0 && second_se.is_finite()) {
            stats.converged = false;
        }
        stats.mean_xi.push(T::of(mean));
        stats.mean_xi_se.push(T::of(mean_se));
        stats.variance_xi.push(T::of((second - mean * mean).max(0.0)));
        stats.second_moment.push(T::of(second));
        stats.second_moment_se.push(T::of(second_se));
        stats.autocorrelation_time.push(T::of(tau_sq));
        let scale = outputs.iter().map(|o| o.scales[i]).sum::<f64>() / chains as f64;
        stats.proposal_scale.push(T::of(scale));
    }
    log::debug!(
        "metropolis: {chains} chains, acceptance {}, hard-core rejections {}, converged {}",
        stats.acceptance_rate,
        stats.hard_core_rejections,
        stats.converged
    );
    Ok(stats)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonEstimate<T> {
    pub value: T,
    pub std_error: T,
}

/// `<xi_i^2> gamma_i^2 - 1` per body, with the standard error carried through.
pub fn empirical_epsilon<T: Scalar>(stats: &SampleStats<T>, gammas: &[T]) -> Result<Vec<EpsilonEstimate<T>>> {
    if !stats.converged {
        return Err(Error::NotConverged(format!(
            "autocorrelation times {:?} over {} recorded sweeps",
            stats.autocorrelation_time, stats.samples_per_chain
        )));
    }
    if gammas.len() != stats.n_bodies() {
        return Err(Error::Domain(format!(
            "{} gammas for {} bodies",
            gammas.len(),
            stats.n_bodies()
        )));
    }
    Ok(gammas
        .iter()
        .zip(stats.second_moment.iter().zip(&stats.second_moment_se))
        .map(|(&g, (&m, &se))| EpsilonEstimate {
            value: m * g * g - T::one(),
            std_error: se * g * g,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn spaced(n: usize, coupling: f64) -> GibbsModel<f64> {
        let gamma: Vec<f64> = (0..n).map(|i| 40.0 + 10.0 * i as f64).collect();
        let orbit: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * i as f64).collect();
        let pairs = n * (n - 1) / 2;
        GibbsModel::new(gamma, orbit, vec![1e-3; n], &vec![coupling; pairs]).unwrap()
    }

    fn short() -> ChainSettings {
        ChainSettings {
            steps: 60_000,
            burn_in: 5_000,
            thinning: 1,
            proposal_sigma_xi: 2.4,
            seed: 11,
            n_chains: 3,
        }
    }

    #[test]
    fn two_state_detailed_balance() {
        let energy = [0.0f64, 0.7];
        let mut rng = chain_rng(5, 0);
        let n = 400_000;
        let mut state = 0usize;
        let mut batches = BatchMeans::new(n / BATCHES);
        for _ in 0..n {
            let proposal = 1 - state;
            if metropolis_accept(energy[proposal] - energy[state], rng.random::<f64>()) {
                state = proposal;
            }
            batches.push(state as f64);
        }
        let target = (-0.7f64).exp() / (1.0 + (-0.7f64).exp());
        let (se, _) = pooled_error(&[&batches]);
        assert!(
            (batches.mean() - target).abs() < 3.0 * se,
            "{} vs {target} (se {se})",
            batches.mean()
        );
    }

    #[test]
    fn decoupled_chains_recover_the_free_variance() {
        let model = spaced(3, 0.0);
        let stats = metropolis_run_model(&model, &short()).unwrap();
        assert!(stats.converged);
        for (i, &g) in model.gammas().iter().enumerate() {
            let target = 1.0 / (g * g);
            assert!(
                (stats.second_moment[i] - target).abs() < 3.0 * stats.second_moment_se[i],
                "body {i}: {} vs {target} +- {}",
                stats.second_moment[i],
                stats.second_moment_se[i]
            );
        }
        let eps = empirical_epsilon(&stats, model.gammas()).unwrap();
        assert!(eps.iter().all(|e| e.value.abs() < 3.0 * e.std_error));
        assert!(stats.acceptance_rate > 0.2);
    }

    #[test]
    fn deterministic_under_seed() {
        let model = spaced(3, 0.05);
        let s = ChainSettings {
            steps: 3_000,
            burn_in: 500,
            ..short()
        };
        let a = metropolis_run_model(&model, &s).unwrap();
        let b = metropolis_run_model(&model, &s).unwrap();
        assert_eq!(a, b);
        let c = metropolis_run_model(&model, &ChainSettings { seed: 12, ..s }).unwrap();
        assert_ne!(a.second_moment, c.second_moment);
    }

    #[test]
    fn overlapping_start_is_refused() {
        let model = GibbsModel::new(vec![50.0; 2], vec![1.0; 2], vec![0.1; 2], &[0.0]).unwrap();
        let start = Configuration::new(vec![0.0; 2], vec![0.0, 0.05]).unwrap();
        assert!(matches!(
            metropolis_run_from(&model, &short(), &start),
            Err(Error::HardCore { .. })
        ));
    }

    #[test]
    fn settings_validation() {
        assert!(ChainSettings {
            steps: 10,
            burn_in: 10,
            ..short()
        }
        .validate()
        .is_err());
        assert!(ChainSettings { thinning: 0, ..short() }.validate().is_err());
        assert!(ChainSettings {
            proposal_sigma_xi: 0.0,
            ..short()
        }
        .validate()
        .is_err());
        assert!(ChainSettings {
            steps: 5_020,
            ..short()
        }
        .validate()
        .is_err());
        assert!(ChainSettings { n_chains: 0, ..short() }.validate().is_err());
    }

    #[test]
    fn unconverged_stats_have_no_epsilon() {
        let model = spaced(2, 0.0);
        let s = ChainSettings {
            steps: 600,
            burn_in: 100,
            ..short()
        };
        let stats = metropolis_run_model(&model, &s).unwrap();
        assert!(!stats.converged);
        assert!(matches!(
            empirical_epsilon(&stats, model.gammas()),
            Err(Error::NotConverged(_))
        ));
    }
}
