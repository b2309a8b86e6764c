use rand::Rng;

use super::{Chromosome, FitnessRecord, GaConfig, Population};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

/// Bernoulli(0.5) genes; all-zero draws are redrawn with the next nonce.
fn draw_member(d: usize, base_seed: u64, stream: Stream, coords: &[u64]) -> Chromosome {
    let mut key = coords.to_vec();
    key.push(0);
    for nonce in 0u64.. {
        *key.last_mut().expect("nonce slot") = nonce;
        let mut rng = stream_rng(base_seed, stream, &key);
        let c = Chromosome::new((0..d).map(|_| rng.random_bool(0.5)).collect());
        if !c.is_all_zero() {
            return c;
        }
    }
    unreachable!("nonce space exhausted")
}

fn check_sizes(d: usize, population_size: usize) -> Result<()> {
    if d < 1 {
        return Err(Error::config("chromosome length must be >= 1"));
    }
    if population_size < 2 {
        return Err(Error::config("population size must be >= 2"));
    }
    Ok(())
}

/// Generation-0 population. Member `l` draws from the stream keyed by
/// `(base_seed, init, l, nonce)`.
pub fn init_population(d: usize, config: &GaConfig) -> Result<Population> {
    check_sizes(d, config.population_size)?;
    let members = (0..config.population_size)
        .map(|l| draw_member(d, config.base_seed, Stream::Init, &[l as u64]))
        .collect();
    Ok(Population {
        members,
        generation: 0,
    })
}

/// A fresh population for random-search round `round`, independent of
/// every other round.
pub fn random_population(d: usize, config: &GaConfig, round: usize) -> Result<Population> {
    check_sizes(d, config.population_size)?;
    let members = (0..config.population_size)
        .map(|l| {
            draw_member(
                d,
                config.base_seed,
                Stream::RandomSearch,
                &[round as u64, l as u64],
            )
        })
        .collect();
    Ok(Population {
        members,
        generation: round,
    })
}

/// Child takes parent 1's genes at even indices and parent 2's at odd
/// indices (0-based). No repair.
pub fn parity_crossover(c1: &Chromosome, c2: &Chromosome) -> Result<Chromosome> {
    if c1.len() != c2.len() {
        return Err(Error::LengthMismatch {
            left: c1.len(),
            right: c2.len(),
        });
    }
    Ok(Chromosome::new(
        c1.genes()
            .iter()
            .zip(c2.genes())
            .enumerate()
            .map(|(j, (&a, &b))| if j % 2 == 0 { a } else { b })
            .collect(),
    ))
}

/// Parity crossover. An all-zero child is replaced by the fitter parent
/// (parent 1 on ties).
pub fn crossover(c1: &Chromosome, score1: f64, c2: &Chromosome, score2: f64) -> Result<Chromosome> {
    let child = parity_crossover(c1, c2)?;
    if !child.is_all_zero() {
        return Ok(child);
    }
    Ok(if score2 > score1 {
        c2.clone()
    } else {
        c1.clone()
    })
}

/// Flip each gene with probability `rate`. If nothing is left expressed,
/// one uniformly chosen gene from the same stream is switched on.
pub fn mutate(c: &Chromosome, rate: f64, seed: u64) -> Result<Chromosome> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::config("mutation rate must lie in [0, 1]"));
    }
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let mut out = c.clone();
    for j in 0..out.len() {
        if rng.random_bool(rate) {
            out.flip(j);
        }
    }
    if out.is_all_zero() && !out.is_empty() {
        let j = rng.random_range(0..out.len());
        out.set(j, true);
    }
    Ok(out)
}

/// Sort by score descending; ties keep the lower member index first.
pub fn rank(records: Vec<FitnessRecord>) -> Vec<FitnessRecord> {
    let mut ranked = records;
    ranked.sort_by(|a, b| b.score.total_cmp(&a.score));
    ranked
}

/// Build generation `generation + 1` from a ranked generation.
///
/// The top `K` chromosomes pass through untouched. Each of the `L - K`
/// children picks two parents uniformly from the top `ceil(L/2)` records
/// (stream `(selection, generation, child)`), applies [`crossover`], then
/// [`mutate`] with seed `(mutation, generation, child)`.
pub fn next_generation(
    ranked: &[FitnessRecord],
    config: &GaConfig,
    generation: usize,
) -> Result<Population> {
    let l = config.population_size;
    let k = config.elitism;
    if k >= l {
        return Err(Error::config(format!(
            "elitism ({k}) must be smaller than the population size ({l})"
        )));
    }
    if ranked.len() != l {
        return Err(Error::LengthMismatch {
            left: ranked.len(),
            right: l,
        });
    }
    let pool = l.div_ceil(2);
    let mut members: Vec<Chromosome> = ranked[..k].iter().map(|r| r.chromosome.clone()).collect();
    for child in 0..l - k {
        let coords = [generation as u64, child as u64];
        let mut rng = stream_rng(config.base_seed, Stream::Selection, &coords);
        let p1 = &ranked[rng.random_range(0..pool)];
        let p2 = &ranked[rng.random_range(0..pool)];
        let crossed = crossover(&p1.chromosome, p1.score, &p2.chromosome, p2.score)?;
        let seed = crate::rng::derive_seed(config.base_seed, Stream::Mutation, &coords);
        members.push(mutate(&crossed, config.mutation_rate, seed)?);
    }
    Ok(Population {
        members,
        generation: generation + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::MetricReport;

    fn record(c: Chromosome, score: f64) -> FitnessRecord {
        FitnessRecord {
            chromosome: c,
            score,
            eval_seconds: 0.0,
            metrics: MetricReport {
                accuracy: score,
                f1: score,
                roc_auc: score,
            },
        }
    }

    fn config(l: usize, k: usize, mr: f64) -> GaConfig {
        GaConfig {
            population_size: l,
            elitism: k,
            mutation_rate: mr,
            base_seed: 99,
            ..GaConfig::default()
        }
    }

    #[test]
    fn init_is_deterministic() {
        let cfg = config(4, 1, 0.2);
        assert_eq!(
            init_population(8, &cfg).unwrap(),
            init_population(8, &cfg).unwrap()
        );
        let other = GaConfig {
            base_seed: 100,
            ..cfg.clone()
        };
        assert_ne!(
            init_population(8, &cfg).unwrap(),
            init_population(8, &other).unwrap()
        );
    }

    #[test]
    fn init_single_gene_forced_on() {
        let pop = init_population(1, &config(10, 1, 0.2)).unwrap();
        assert!(pop.members.iter().all(|c| c.genes() == [true]));
    }

    #[test]
    fn init_errors() {
        assert!(init_population(0, &config(4, 1, 0.2)).is_err());
        assert!(init_population(4, &config(1, 0, 0.2)).is_err());
    }

    #[test]
    fn init_popcount_concentrates() {
        // Binomial(217, 0.5): mean 108.5, sd ~7.4, so the mean of 150 draws
        // sits far inside [87, 130].
        let pop = init_population(217, &config(150, 2, 0.2)).unwrap();
        let mean = pop
            .members
            .iter()
            .map(Chromosome::count_ones)
            .sum::<usize>() as f64
            / 150.0;
        assert!((87.0..=130.0).contains(&mean), "mean popcount {mean}");
    }

    #[test]
    fn random_rounds_differ_and_replay() {
        let cfg = config(5, 1, 0.2);
        let a = random_population(6, &cfg, 0).unwrap();
        let b = random_population(6, &cfg, 1).unwrap();
        assert_ne!(a.members, b.members);
        assert_eq!(a, random_population(6, &cfg, 0).unwrap());
    }

    #[test]
    fn crossover_examples() {
        let c1 = Chromosome::from_bits(&[1, 0, 1, 0]);
        let c2 = Chromosome::from_bits(&[0, 1, 1, 1]);
        assert_eq!(
            crossover(&c1, 0.0, &c2, 0.0).unwrap(),
            Chromosome::all_ones(4)
        );
        assert_eq!(crossover(&c1, 0.3, &c1, 0.1).unwrap(), c1);

        let a = Chromosome::from_bits(&[0, 1]);
        let b = Chromosome::from_bits(&[1, 0]);
        assert!(parity_crossover(&a, &b).unwrap().is_all_zero());
        assert_eq!(crossover(&a, 0.4, &b, 0.6).unwrap(), b);
        assert_eq!(crossover(&a, 0.6, &b, 0.4).unwrap(), a);
        assert_eq!(crossover(&a, 0.5, &b, 0.5).unwrap(), a);
        assert!(crossover(&a, 0.0, &c1, 0.0).is_err());
    }

    #[test]
    fn mutate_extremes() {
        let c = Chromosome::from_bits(&[1, 0, 1]);
        assert_eq!(mutate(&c, 0.0, 5).unwrap(), c);
        assert_eq!(
            mutate(&c, 1.0, 5).unwrap(),
            Chromosome::from_bits(&[0, 1, 0])
        );
        assert_eq!(mutate(&c, 0.3, 5).unwrap(), mutate(&c, 0.3, 5).unwrap());
        assert!(mutate(&c, 1.5, 5).is_err());
    }

    #[test]
    fn mutate_repairs_all_zero() {
        // complement of all-ones is all-zero -> exactly one gene repaired
        let out = mutate(&Chromosome::all_ones(6), 1.0, 3).unwrap();
        assert_eq!(out.count_ones(), 1);
    }

    #[test]
    fn rank_breaks_ties_by_index() {
        let recs = vec![
            record(Chromosome::from_bits(&[1, 0]), 0.5),
            record(Chromosome::from_bits(&[0, 1]), 0.9),
            record(Chromosome::from_bits(&[1, 1]), 0.5),
        ];
        let ranked = rank(recs);
        let order: Vec<String> = ranked.iter().map(|r| r.chromosome.to_string()).collect();
        assert_eq!(order, ["01", "10", "11"]);
    }

    fn ranked_population(l: usize, d: usize) -> Vec<FitnessRecord> {
        let pop = init_population(d, &config(l, 1, 0.2)).unwrap();
        rank(
            pop.members
                .into_iter()
                .enumerate()
                .map(|(i, c)| record(c, 1.0 - i as f64 / l as f64))
                .collect(),
        )
    }

    #[test]
    fn elites_untouched() {
        let ranked = ranked_population(6, 10);
        let cfg = config(6, 5, 0.5);
        let next = next_generation(&ranked, &cfg, 3).unwrap();
        assert_eq!(next.len(), 6);
        assert_eq!(next.generation, 4);
        for i in 0..5 {
            assert_eq!(next.members[i], ranked[i].chromosome);
        }
    }

    #[test]
    fn identical_parents_without_mutation() {
        let c = Chromosome::from_bits(&[1, 0, 0, 1, 1]);
        let ranked: Vec<FitnessRecord> = (0..8).map(|_| record(c.clone(), 0.7)).collect();
        let next = next_generation(&ranked, &config(8, 2, 0.0), 0).unwrap();
        assert!(next.members.iter().all(|m| *m == c));
    }

    #[test]
    fn next_generation_deterministic_and_checked() {
        let ranked = ranked_population(10, 12);
        let cfg = config(10, 2, 0.2);
        assert_eq!(
            next_generation(&ranked, &cfg, 1).unwrap(),
            next_generation(&ranked, &cfg, 1).unwrap()
        );
        assert_ne!(
            next_generation(&ranked, &cfg, 1).unwrap().members,
            next_generation(&ranked, &cfg, 2).unwrap().members
        );
        assert!(next_generation(&ranked, &config(10, 10, 0.2), 1).is_err());
        assert!(next_generation(&ranked[..9], &cfg, 1).is_err());
    }

    #[test]
    fn children_descend_from_top_half() {
        // MR = 0: every child is a parity cross of two top-half parents.
        let ranked = ranked_population(8, 10);
        let next = next_generation(&ranked, &config(8, 0, 0.0), 0).unwrap();
        let top = &ranked[..4];
        for child in &next.members {
            let ok = top.iter().any(|a| {
                top.iter().any(|b| {
                    let raw = parity_crossover(&a.chromosome, &b.chromosome).unwrap();
                    raw == *child
                        || (raw.is_all_zero() && (*child == a.chromosome || *child == b.chromosome))
                })
            });
            assert!(ok);
        }
    }
}
