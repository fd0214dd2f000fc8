//! Seeded random KB generator for fuzzing and scaling runs.
//!
//! All randomness comes from [`ChaCha8Rng`] (ChaCha with 8 rounds, as
//! implemented by `rand_chacha`), so a seed yields the same KB on every
//! platform. Batch member `i` draws from stream `i` of the batch seed.
//!
//! Concept names are `A1..AN`. Each role leaf picks `R1..RN` and is turned
//! into its global twin `G1..GN` with probability `pg`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kb::{Assertion, Concept, Gci, Role, RoleDecl, Signature, TemporalKb, Timestamp};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    /// Number of concept names and of role names.
    pub n: usize,
    /// GCIs per TBox.
    pub lt: usize,
    /// Exact length of every concept expression.
    pub lc: usize,
    /// Probability mass of the temporal operators.
    pub pt: f64,
    /// Probability that a role leaf is global.
    pub pg: f64,
    pub abox_size: usize,
    pub max_time: Timestamp,
    /// KBs per batch.
    pub batch: usize,
    /// Probability that an ABox assertion is negated.
    pub negative_prob: f64,
    /// Probability that a concept name is declared rigid.
    pub rigid_prob: f64,
    /// Probability that a role name is declared functional.
    pub functional_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            n: 3,
            lt: 4,
            lc: 3,
            pt: 0.5,
            pg: 0.5,
            abox_size: 8,
            max_time: 3,
            batch: 1,
            negative_prob: 0.0,
            rigid_prob: 0.0,
            functional_prob: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GenError {
    #[error("{name} must lie in [0, 1], got {value}")]
    Probability { name: &'static str, value: f64 },
    #[error("concept length must be at least 1")]
    ZeroLength,
    #[error("need at least one concept or role name")]
    EmptyVocabulary,
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        for (name, value) in [
            ("pt", self.pt),
            ("pg", self.pg),
            ("negative_prob", self.negative_prob),
            ("rigid_prob", self.rigid_prob),
            ("functional_prob", self.functional_prob),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(GenError::Probability { name, value });
            }
        }
        if self.lc == 0 {
            return Err(GenError::ZeroLength);
        }
        if self.n == 0 {
            return Err(GenError::EmptyVocabulary);
        }
        Ok(())
    }

    /// Generator for batch member `index`.
    pub fn member_rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

fn basic<R: Rng>(config: &GenConfig, rng: &mut R) -> Concept {
    let pick = rng.random_range(0..2 * config.n);
    if pick < config.n {
        return Concept::atomic(format!("A{}", pick + 1));
    }
    let i = pick - config.n + 1;
    let global = rng.random_bool(config.pg);
    let inverse = rng.random_bool(0.5);
    let name = if global { format!("G{i}") } else { format!("R{i}") };
    Concept::exists(Role { name, inverse })
}

fn unary<R: Rng>(pt: f64, rng: &mut R, inner: Concept) -> Concept {
    let x: f64 = rng.random();
    if x < pt / 2.0 {
        inner.sometime()
    } else if x < pt {
        inner.always()
    } else {
        inner.not()
    }
}

fn sample<R: Rng>(len: usize, pt: f64, config: &GenConfig, rng: &mut R) -> Concept {
    match len {
        0 | 1 => basic(config, rng),
        2 => {
            let inner = sample(1, pt, config, rng);
            unary(pt, rng, inner)
        }
        _ => {
            let x: f64 = rng.random();
            if x < pt / 2.0 {
                sample(len - 1, pt, config, rng).sometime()
            } else if x < pt {
                sample(len - 1, pt, config, rng).always()
            } else if x < pt + (1.0 - pt) / 2.0 {
                sample(len - 1, pt, config, rng).not()
            } else {
                let k = rng.random_range(1..=len - 2);
                let left = sample(k, pt, config, rng);
                left.and(sample(len - k - 1, pt, config, rng))
            }
        }
    }
}

/// A concept expression of exactly `len` nodes. Length 2 applies one of
/// `!`, `F`, `G` (the temporal ones with mass `pt`); longer expressions also
/// allow `&`, which shares the `1 - pt` mass with `!`.
pub fn random_concept<R: Rng>(len: usize, config: &GenConfig, rng: &mut R) -> Concept {
    sample(len.max(1), config.pt, config, rng)
}

/// `lt` GCIs with both sides of length `lc`; left-hand sides carry no
/// temporal operator.
pub fn random_tbox<R: Rng>(config: &GenConfig, rng: &mut R) -> Vec<Gci> {
    (0..config.lt)
        .map(|_| {
            let lhs = sample(config.lc, 0.0, config, rng);
            let rhs = sample(config.lc, config.pt, config, rng);
            Gci::new(lhs, rhs)
        })
        .collect()
}

/// Concept and role names available to ABox generation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub concepts: Vec<String>,
    pub roles: Vec<String>,
}

impl Vocabulary {
    /// Names occurring in `gcis`, sorted.
    pub fn of(gcis: &[Gci]) -> Self {
        let mut concepts = BTreeSet::new();
        let mut roles = BTreeSet::new();
        for gci in gcis {
            for side in [&gci.lhs, &gci.rhs] {
                collect(side, &mut concepts, &mut roles);
            }
        }
        Vocabulary { concepts: concepts.into_iter().collect(), roles: roles.into_iter().collect() }
    }

    /// `A1..AN` and `R1..RN`.
    pub fn full(n: usize) -> Self {
        Vocabulary {
            concepts: (1..=n).map(|i| format!("A{i}")).collect(),
            roles: (1..=n).map(|i| format!("R{i}")).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty() && self.roles.is_empty()
    }
}

fn collect(c: &Concept, concepts: &mut BTreeSet<String>, roles: &mut BTreeSet<String>) {
    match c {
        Concept::Top | Concept::Bottom => {}
        Concept::Atomic(a) => {
            concepts.insert(a.clone());
        }
        Concept::Exists(r) => {
            roles.insert(r.name.clone());
        }
        Concept::Not(x) | Concept::Sometime(x) | Concept::Always(x) => collect(x, concepts, roles),
        Concept::And(a, b) | Concept::Or(a, b) => {
            collect(a, concepts, roles);
            collect(b, concepts, roles);
        }
    }
}

/// Individual names `a1..ak` with `k = ⌈√size⌉`.
pub fn individual_pool(size: usize) -> Vec<String> {
    let mut k = 0;
    while k * k < size {
        k += 1;
    }
    (1..=k.max(1)).map(|i| format!("a{i}")).collect()
}

/// `abox_size` distinct assertions (fewer only when the vocabulary cannot
/// supply that many) with a uniform predicate, individuals from
/// [`individual_pool`] and timestamps uniform in `[0, max_time]`.
pub fn random_abox<R: Rng>(config: &GenConfig, vocab: &Vocabulary, rng: &mut R) -> Result<Vec<Assertion>, GenError> {
    if config.abox_size == 0 {
        return Ok(Vec::new());
    }
    if vocab.is_empty() {
        return Err(GenError::EmptyVocabulary);
    }
    let pool = individual_pool(config.abox_size);
    let k = pool.len();
    let times = config.max_time as usize + 1;
    let polarity = if config.negative_prob > 0.0 { 2 } else { 1 };
    let capacity = (vocab.concepts.len() * k + vocab.roles.len() * k * k) * times * polarity;
    let target = config.abox_size.min(capacity);

    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(target);
    let predicates = vocab.concepts.len() + vocab.roles.len();
    while out.len() < target {
        let p = rng.random_range(0..predicates);
        let t = rng.random_range(0..=config.max_time);
        let mut a = if p < vocab.concepts.len() {
            Assertion::concept(&vocab.concepts[p], &pool[rng.random_range(0..k)], t)
        } else {
            let r = &vocab.roles[p - vocab.concepts.len()];
            let s = &pool[rng.random_range(0..k)];
            Assertion::role(r, s, &pool[rng.random_range(0..k)], t)
        };
        if config.negative_prob > 0.0 && rng.random_bool(config.negative_prob) {
            a = a.negate();
        }
        if seen.insert(a.clone()) {
            out.push(a);
        }
    }
    Ok(out)
}

/// A TBox, an ABox over its names (or over `A1..AN`, `R1..RN` when the
/// TBox mentions none) and a signature declaring everything used.
pub fn random_kb<R: Rng>(config: &GenConfig, rng: &mut R) -> Result<TemporalKb, GenError> {
    config.validate()?;
    let gcis = random_tbox(config, rng);
    let mut vocab = Vocabulary::of(&gcis);
    if vocab.is_empty() {
        vocab = Vocabulary::full(config.n);
    }
    let abox = random_abox(config, &vocab, rng)?;

    let mut sig = Signature::default();
    for c in &vocab.concepts {
        let rigid = config.rigid_prob > 0.0 && rng.random_bool(config.rigid_prob);
        sig.declare_concept(c.clone(), rigid);
    }
    let mut roles: BTreeMap<&str, RoleDecl> = BTreeMap::new();
    for r in &vocab.roles {
        let functional = config.functional_prob > 0.0 && rng.random_bool(config.functional_prob);
        roles.insert(r, RoleDecl { global: r.starts_with('G'), functional, inverse_functional: false });
    }
    for (name, decl) in roles {
        sig.declare_role(name, decl);
    }
    for a in &abox {
        for i in a.individuals() {
            sig.declare_individual(i);
        }
    }
    Ok(TemporalKb::new(sig, gcis, abox))
}

/// `config.batch` KBs, member `i` drawn from [`GenConfig::member_rng`].
pub fn generate_batch(config: &GenConfig) -> Result<Vec<TemporalKb>, GenError> {
    (0..config.batch).map(|i| random_kb(config, &mut config.member_rng(i))).collect()
}
