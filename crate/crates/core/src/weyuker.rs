//! Empirical checks of Weyuker's properties 1 to 6 for the CK metrics.
//!
//! Properties 1, 2, 3, 5 and 6 are existential: a search either finds a
//! witness or runs out of budget, and running out proves nothing. Property 4
//! is universal: a search either finds a counterexample or reports that the
//! bound held on every case it tried.
//!
//! Population checks (1 to 3) look at the classes of a fixed model. The
//! combination checks (4 to 6) draw cases from a [`CaseGenerator`]; each case
//! is reproducible from its trial number, so a recorded witness can be
//! rebuilt and re-evaluated later.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::metrics::{self, WmcWeighting};
use crate::model::{
    build_model, combine, CallSite, ClassDef, ClassModel, FieldDef, MethodDef, ModelError,
    Receiver, Signature,
};

/// Two metric values closer than this are equal.
pub const VALUE_TOLERANCE: f64 = 1e-9;

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= VALUE_TOLERANCE
}

/// A single metric viewed as a real-valued function of a class in a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Wmc(WmcWeighting),
    Dit,
    Noc,
    Cbo,
    Rfc,
    /// Connected-component LCOM.
    Lcom,
    /// Percentage LCOM.
    LcomPercent,
}

impl Metric {
    /// The six CK metrics, with WMC weighted as given.
    pub fn ck_suite(weighting: WmcWeighting) -> [Metric; 6] {
        [
            Metric::Wmc(weighting),
            Metric::Dit,
            Metric::Noc,
            Metric::Cbo,
            Metric::Rfc,
            Metric::Lcom,
        ]
    }

    pub fn evaluate(self, class: &ClassDef, model: &ClassModel) -> f64 {
        match self {
            Metric::Wmc(w) => metrics::wmc(class, w) as f64,
            Metric::Dit => metrics::dit(class, model) as f64,
            Metric::Noc => metrics::noc(class, model) as f64,
            Metric::Cbo => metrics::cbo(class, model) as f64,
            Metric::Rfc => metrics::rfc(class, model) as f64,
            Metric::Lcom => metrics::lcom_components(class) as f64,
            Metric::LcomPercent => metrics::lcom_percent(class),
        }
    }

    /// Value for a class looked up by name.
    pub fn of(self, model: &ClassModel, name: &str) -> f64 {
        let class = model
            .get(name)
            .unwrap_or_else(|| panic!("class `{name}` not in model"));
        self.evaluate(class, model)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Wmc(WmcWeighting::Unit) => "WMC",
            Metric::Wmc(WmcWeighting::Cyclomatic) => "WMC-cyclomatic",
            Metric::Dit => "DIT",
            Metric::Noc => "NOC",
            Metric::Cbo => "CBO",
            Metric::Rfc => "RFC",
            Metric::Lcom => "LCOM",
            Metric::LcomPercent => "LCOM%",
        })
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "WMC" => Metric::Wmc(WmcWeighting::Unit),
            "WMC-cyclomatic" => Metric::Wmc(WmcWeighting::Cyclomatic),
            "DIT" => Metric::Dit,
            "NOC" => Metric::Noc,
            "CBO" => Metric::Cbo,
            "RFC" => Metric::Rfc,
            "LCOM" => Metric::Lcom,
            "LCOM%" => Metric::LcomPercent,
            other => return Err(format!("unknown metric `{other}`")),
        })
    }
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Metric {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    WitnessFound,
    NoWitnessInBudget,
    UniversalHolds,
    Counterexample,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::WitnessFound => "WITNESS_FOUND",
            Verdict::NoWitnessInBudget => "NO_WITNESS_IN_BUDGET",
            Verdict::UniversalHolds => "UNIVERSAL_HOLDS",
            Verdict::Counterexample => "COUNTEREXAMPLE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub class: String,
    pub value: f64,
}

/// Classes behind a verdict. Combined classes appear under their
/// synthesized `P+Q` names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub observations: Vec<Observation>,
    /// Generator trial that produced the case; `None` for population checks.
    pub trial: Option<u64>,
}

impl Witness {
    fn new(obs: &[(&str, f64)], trial: Option<u64>) -> Self {
        Self {
            observations: obs
                .iter()
                .map(|(c, v)| Observation {
                    class: c.to_string(),
                    value: *v,
                })
                .collect(),
            trial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub property: u8,
    pub metric: Metric,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Comparisons (properties 1-3) or generated cases (4-6) examined.
    pub budget_used: u64,
}

impl PropertyVerdict {
    fn new(
        property: u8,
        metric: Metric,
        verdict: Verdict,
        witness: Option<Witness>,
        used: u64,
    ) -> Self {
        Self {
            property,
            metric,
            verdict,
            witness,
            budget_used: used,
        }
    }
}

/// Classes plus pairs of same-interface classes for property 3.
#[derive(Debug, Clone)]
pub struct Population {
    pub model: ClassModel,
    pub twins: Vec<(String, String)>,
}

impl Population {
    pub fn new(model: ClassModel, twins: Vec<(String, String)>) -> Self {
        Self { model, twins }
    }

    /// Pairs every two classes of `model` that share a non-empty public
    /// interface.
    pub fn with_interface_twins(model: ClassModel) -> Self {
        let interfaces: Vec<(String, BTreeSet<Signature>)> = model
            .classes()
            .iter()
            .map(|c| (c.name.clone(), public_interface(&model, &c.name)))
            .filter(|(_, i)| !i.is_empty())
            .collect();
        let mut twins = Vec::new();
        for (i, (a, ia)) in interfaces.iter().enumerate() {
            for (b, ib) in &interfaces[i + 1..] {
                if ia == ib {
                    twins.push((a.clone(), b.clone()));
                }
            }
        }
        Self { model, twins }
    }
}

/// Signatures a client can call: declared plus inherited.
pub fn public_interface(model: &ClassModel, name: &str) -> BTreeSet<Signature> {
    model
        .get(name)
        .into_iter()
        .chain(model.ancestors(name))
        .flat_map(|c| c.methods.iter().map(MethodDef::signature))
        .collect()
}

pub fn same_interface(model: &ClassModel, a: &str, b: &str) -> bool {
    model.contains(a)
        && model.contains(b)
        && public_interface(model, a) == public_interface(model, b)
}

/// Property 1: some pair of classes differs.
pub fn check_property1(metric: Metric, model: &ClassModel) -> PropertyVerdict {
    let classes = model.classes();
    let mut used = 0;
    if let Some(first) = classes.first() {
        let v0 = metric.evaluate(first, model);
        for c in &classes[1..] {
            used += 1;
            let v = metric.evaluate(c, model);
            if !same(v0, v) {
                let w = Witness::new(&[(&first.name, v0), (&c.name, v)], None);
                return PropertyVerdict::new(1, metric, Verdict::WitnessFound, Some(w), used);
            }
        }
    }
    PropertyVerdict::new(1, metric, Verdict::NoWitnessInBudget, None, used)
}

/// Property 2: two distinct classes share a value.
pub fn check_property2(metric: Metric, model: &ClassModel) -> PropertyVerdict {
    let values: Vec<(&str, f64)> = model
        .classes()
        .iter()
        .map(|c| (c.name.as_str(), metric.evaluate(c, model)))
        .collect();
    let mut used = 0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            used += 1;
            if same(a.1, b.1) {
                let w = Witness::new(&[*a, *b], None);
                return PropertyVerdict::new(2, metric, Verdict::WitnessFound, Some(w), used);
            }
        }
    }
    PropertyVerdict::new(2, metric, Verdict::NoWitnessInBudget, None, used)
}

/// Property 3: two classes with the same interface differ. Pairs whose
/// interfaces differ are skipped.
pub fn check_property3(metric: Metric, population: &Population) -> PropertyVerdict {
    let model = &population.model;
    let mut used = 0;
    for (a, b) in &population.twins {
        if !same_interface(model, a, b) {
            continue;
        }
        used += 1;
        let (va, vb) = (metric.of(model, a), metric.of(model, b));
        if !same(va, vb) {
            let w = Witness::new(&[(a, va), (b, vb)], None);
            return PropertyVerdict::new(3, metric, Verdict::WitnessFound, Some(w), used);
        }
    }
    PropertyVerdict::new(3, metric, Verdict::NoWitnessInBudget, None, used)
}

/// Adds `p + q` to `model`, returning the extended model and the new name.
///
/// Fields that methods of the combination use but can no longer see (they
/// were inherited by `q` from a different line) are copied in, so the
/// combined class stays well-formed.
pub fn with_combination(model: &ClassModel, p: &str, q: &str) -> (ClassModel, String) {
    let (pc, qc) = (
        model.get(p).expect("p in model"),
        model.get(q).expect("q in model"),
    );
    let mut merged = combine(pc, qc);
    while model.contains(&merged.name) {
        merged.name.push('\'');
    }
    let mut visible: BTreeSet<String> = merged.fields.iter().map(|f| f.name.clone()).collect();
    if let Some(parent) = merged.parent.as_deref() {
        visible.extend(
            model
                .get(parent)
                .into_iter()
                .chain(model.ancestors(parent))
                .flat_map(|c| c.fields.iter().map(|f| f.name.clone())),
        );
    }
    let sources: Vec<&ClassDef> = [pc, qc]
        .into_iter()
        .flat_map(|c| std::iter::once(c).chain(model.ancestors(&c.name)))
        .collect();
    let used: BTreeSet<String> = merged
        .methods
        .iter()
        .flat_map(|m| m.field_uses.iter().cloned())
        .collect();
    for f in used.difference(&visible) {
        let decl = sources
            .iter()
            .find_map(|c| c.field(f))
            .cloned()
            .unwrap_or_else(|| FieldDef::new(f.clone(), "int"));
        merged.fields.push(decl);
    }
    let name = merged.name.clone();
    let extended = model
        .with_class(merged)
        .expect("combination of valid classes is valid");
    (extended, name)
}

/// μ(P+Q) evaluated in `model` extended with the combination.
pub fn combined_value(metric: Metric, model: &ClassModel, p: &str, q: &str) -> f64 {
    let (extended, name) = with_combination(model, p, q);
    metric.of(&extended, &name)
}

/// A model plus the classes picked out of it for one trial.
#[derive(Debug, Clone)]
pub struct Case {
    pub model: ClassModel,
    pub picks: Vec<String>,
}

/// Deterministic source of cases: the same trial and pick count always give
/// the same case.
pub trait CaseGenerator {
    fn case(&self, trial: u64, picks: usize) -> Case;
}

impl<F: Fn(u64, usize) -> Case> CaseGenerator for F {
    fn case(&self, trial: u64, picks: usize) -> Case {
        self(trial, picks)
    }
}

/// Property 4: μ(P+Q) ≥ max(μ(P), μ(Q)) on every generated pair.
pub fn check_property4(metric: Metric, gen: &dyn CaseGenerator, budget: u64) -> PropertyVerdict {
    for trial in 0..budget {
        let Case { model, picks } = gen.case(trial, 2);
        let (p, q) = (&picks[0], &picks[1]);
        let (vp, vq) = (metric.of(&model, p), metric.of(&model, q));
        let (extended, pq) = with_combination(&model, p, q);
        let vpq = metric.of(&extended, &pq);
        if vpq < vp.max(vq) - VALUE_TOLERANCE {
            let w = Witness::new(&[(p, vp), (q, vq), (&pq, vpq)], Some(trial));
            return PropertyVerdict::new(4, metric, Verdict::Counterexample, Some(w), trial + 1);
        }
    }
    PropertyVerdict::new(4, metric, Verdict::UniversalHolds, None, budget)
}

/// Property 5: μ(P) = μ(Q) yet μ(P+R) ≠ μ(Q+R) for some generated triple.
pub fn check_property5(metric: Metric, gen: &dyn CaseGenerator, budget: u64) -> PropertyVerdict {
    for trial in 0..budget {
        let Case { model, picks } = gen.case(trial, 3);
        let (p, q, r) = (&picks[0], &picks[1], &picks[2]);
        let (vp, vq) = (metric.of(&model, p), metric.of(&model, q));
        if !same(vp, vq) {
            continue;
        }
        let (mpr, pr) = with_combination(&model, p, r);
        let (mqr, qr) = with_combination(&model, q, r);
        let (vpr, vqr) = (metric.of(&mpr, &pr), metric.of(&mqr, &qr));
        if !same(vpr, vqr) {
            let w = Witness::new(&[(p, vp), (q, vq), (&pr, vpr), (&qr, vqr)], Some(trial));
            return PropertyVerdict::new(5, metric, Verdict::WitnessFound, Some(w), trial + 1);
        }
    }
    PropertyVerdict::new(5, metric, Verdict::NoWitnessInBudget, None, budget)
}

/// Property 6: μ(P) + μ(Q) < μ(P+Q) for some generated pair.
pub fn check_property6(metric: Metric, gen: &dyn CaseGenerator, budget: u64) -> PropertyVerdict {
    for trial in 0..budget {
        let Case { model, picks } = gen.case(trial, 2);
        let (p, q) = (&picks[0], &picks[1]);
        let (vp, vq) = (metric.of(&model, p), metric.of(&model, q));
        let (extended, pq) = with_combination(&model, p, q);
        let vpq = metric.of(&extended, &pq);
        if vp + vq < vpq - VALUE_TOLERANCE {
            let w = Witness::new(&[(p, vp), (q, vq), (&pq, vpq)], Some(trial));
            return PropertyVerdict::new(6, metric, Verdict::WitnessFound, Some(w), trial + 1);
        }
    }
    PropertyVerdict::new(6, metric, Verdict::NoWitnessInBudget, None, budget)
}

/// Bounds for randomly generated classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub max_methods: usize,
    pub max_fields: usize,
    pub max_depth: usize,
    /// Classes in each generated case model.
    pub classes_per_case: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            max_methods: 8,
            max_fields: 6,
            max_depth: 3,
            classes_per_case: 6,
        }
    }
}

const METHOD_NAMES: [&str; 10] = ["m0", "m1", "m2", "m3", "m4", "m5", "m6", "m7", "m8", "m9"];
const FIELD_NAMES: [&str; 8] = ["f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7"];
const EXTERNALS: [&str; 3] = ["Ext0", "Ext1", "Ext2"];
const EXTERNAL_BASE: &str = "ExtBase";

/// Seeded generator of small random class hierarchies.
#[derive(Debug, Clone)]
pub struct RandomClasses {
    pub seed: u64,
    pub config: GeneratorConfig,
}

impl RandomClasses {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            config: GeneratorConfig::default(),
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// A model of `n` random classes named `{prefix}0..{prefix}{n-1}`.
    pub fn model(&self, stream: u64, prefix: &str, n: usize) -> ClassModel {
        let mut rng = self.rng(stream);
        let classes = self.classes(&mut rng, prefix, n);
        build_model(
            classes,
            EXTERNALS.iter().chain([&EXTERNAL_BASE]).copied(),
            None,
        )
        .expect("generated classes are valid")
    }

    fn classes(&self, rng: &mut ChaCha8Rng, prefix: &str, n: usize) -> Vec<ClassDef> {
        let cfg = self.config;
        let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
        let mut depth = vec![0usize; n];
        let mut classes: Vec<ClassDef> = Vec::with_capacity(n);
        for i in 0..n {
            let mut class = ClassDef::new(names[i].clone());
            let candidates: Vec<usize> = (0..i).filter(|&j| depth[j] < cfg.max_depth).collect();
            if !candidates.is_empty() && rng.random_bool(0.5) {
                let j = *candidates.choose(rng).expect("non-empty");
                class.parent = Some(names[j].clone());
                depth[i] = depth[j] + 1;
            } else if cfg.max_depth > 0 && rng.random_bool(0.15) {
                class.parent = Some(EXTERNAL_BASE.to_string());
                depth[i] = 1;
            }
            class.fields = random_fields(rng, cfg.max_fields, &names[..i]);
            let visible = visible_fields(&class, &classes);
            let k = rng.random_range(0..=cfg.max_methods);
            class.methods = (0..k)
                .map(|_| {
                    Signature::new(
                        *METHOD_NAMES.choose(rng).expect("pool"),
                        rng.random_range(0..=2),
                    )
                })
                .collect::<BTreeSet<_>>()
                .into_iter()
                .map(|sig| random_method(rng, sig, &visible, &names))
                .collect();
            classes.push(class);
        }
        classes
    }

    /// Population of `n` random classes plus a same-interface twin for each,
    /// merged into `base`.
    pub fn population(&self, base: Population, n: usize) -> Result<Population, ModelError> {
        let mut rng = self.rng(u64::MAX);
        let mut classes = self.classes(&mut rng, "Gen", n);
        let mut twins = base.twins;
        for i in 0..n {
            let original = classes[i].clone();
            let mut twin = ClassDef::new(format!("{}Twin", original.name));
            twin.parent = original.parent.clone();
            twin.fields = random_fields(&mut rng, self.config.max_fields, &[]);
            let visible = visible_fields(&twin, &classes);
            let names: Vec<String> = classes.iter().take(n).map(|c| c.name.clone()).collect();
            twin.methods = original
                .methods
                .iter()
                .map(|m| random_method(&mut rng, m.signature(), &visible, &names))
                .collect();
            twins.push((original.name.clone(), twin.name.clone()));
            classes.push(twin);
        }
        let generated = build_model(
            classes,
            EXTERNALS.iter().chain([&EXTERNAL_BASE]).copied(),
            None,
        )
        .expect("generated classes are valid");
        let model = base.model.merge(&generated)?;
        Ok(Population { model, twins })
    }
}

fn random_fields(rng: &mut ChaCha8Rng, max: usize, earlier: &[String]) -> Vec<FieldDef> {
    let k = rng.random_range(0..=max.min(FIELD_NAMES.len()));
    let mut names = FIELD_NAMES.to_vec();
    names.shuffle(rng);
    names[..k]
        .iter()
        .map(|f| {
            let ty = match rng.random_range(0..4) {
                0 | 1 => "int".to_string(),
                2 if !earlier.is_empty() => earlier.choose(rng).expect("non-empty").clone(),
                _ => EXTERNALS.choose(rng).expect("pool").to_string(),
            };
            FieldDef::new(*f, ty)
        })
        .collect()
}

fn visible_fields(class: &ClassDef, earlier: &[ClassDef]) -> Vec<String> {
    let by_name: HashMap<&str, &ClassDef> = earlier.iter().map(|c| (c.name.as_str(), c)).collect();
    let mut out: Vec<String> = class.fields.iter().map(|f| f.name.clone()).collect();
    let mut cur = class.parent.as_deref().and_then(|p| by_name.get(p));
    while let Some(c) = cur {
        out.extend(c.fields.iter().map(|f| f.name.clone()));
        cur = c.parent.as_deref().and_then(|p| by_name.get(p));
    }
    out.sort();
    out.dedup();
    out
}

fn random_method(
    rng: &mut ChaCha8Rng,
    sig: Signature,
    visible: &[String],
    classes: &[String],
) -> MethodDef {
    let mut m = MethodDef::new(sig.name, sig.arity).with_decision_points(rng.random_range(0..=3));
    m.field_uses = visible
        .iter()
        .filter(|_| rng.random_bool(0.35))
        .cloned()
        .collect();
    for _ in 0..rng.random_range(0..=2) {
        let method = *METHOD_NAMES.choose(rng).expect("pool");
        let arity = rng.random_range(0..=2);
        let receiver = match rng.random_range(0..3) {
            0 => Receiver::SelfRef,
            1 if !classes.is_empty() => {
                Receiver::Class(classes.choose(rng).expect("non-empty").clone())
            }
            _ => Receiver::Class(EXTERNALS.choose(rng).expect("pool").to_string()),
        };
        let call = CallSite::new(receiver, method, arity);
        if !m.calls.contains(&call) {
            m.calls.push(call);
        }
    }
    m
}

impl CaseGenerator for RandomClasses {
    fn case(&self, trial: u64, picks: usize) -> Case {
        let n = self.config.classes_per_case.max(picks);
        let mut rng = self.rng(trial);
        let classes = self.classes(&mut rng, "C", n);
        let model = build_model(
            classes,
            EXTERNALS.iter().chain([&EXTERNAL_BASE]).copied(),
            None,
        )
        .expect("generated classes are valid");
        let mut names: Vec<String> = model.classes().iter().map(|c| c.name.clone()).collect();
        names.shuffle(&mut rng);
        names.truncate(picks);
        Case {
            model,
            picks: names,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub budget: u64,
    pub weighting: WmcWeighting,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            budget: 1000,
            weighting: WmcWeighting::Unit,
        }
    }
}

/// All six properties for the six CK metrics: property-major order.
pub fn run_weyuker_suite(population: &Population, config: SuiteConfig) -> Vec<PropertyVerdict> {
    let gen = RandomClasses::new(config.seed);
    run_suite_with(population, &gen, config)
}

pub fn run_suite_with(
    population: &Population,
    gen: &dyn CaseGenerator,
    config: SuiteConfig,
) -> Vec<PropertyVerdict> {
    let metrics = Metric::ck_suite(config.weighting);
    let mut out = Vec::with_capacity(36);
    for m in metrics {
        out.push(check_property1(m, &population.model));
    }
    for m in metrics {
        out.push(check_property2(m, &population.model));
    }
    for m in metrics {
        out.push(check_property3(m, population));
    }
    for m in metrics {
        out.push(check_property4(m, gen, config.budget));
    }
    for m in metrics {
        out.push(check_property5(m, gen, config.budget));
    }
    for m in metrics {
        out.push(check_property6(m, gen, config.budget));
    }
    out
}
