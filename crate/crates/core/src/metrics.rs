//! The six Chidamber-Kemerer metrics, computed per class from a [`ClassModel`].
//!
//! Every function here is pure; a model can be shared across threads and
//! classes evaluated in any order.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{is_primitive, CallSite, ClassDef, ClassModel, Receiver, Signature};

/// How WMC weighs each method.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WmcWeighting {
    /// Every method counts 1.
    #[default]
    Unit,
    /// Every method counts 1 + its decision points.
    Cyclomatic,
}

impl fmt::Display for WmcWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WmcWeighting::Unit => "unit",
            WmcWeighting::Cyclomatic => "cyclomatic",
        })
    }
}

impl FromStr for WmcWeighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "unit" => Ok(WmcWeighting::Unit),
            "cyclomatic" => Ok(WmcWeighting::Cyclomatic),
            other => Err(format!("unknown WMC weighting `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricVector {
    pub wmc: usize,
    pub dit: usize,
    pub noc: usize,
    pub cbo: usize,
    pub rfc: usize,
    pub lcom_components: usize,
    pub lcom_percent: f64,
}

/// Weighted methods per class. Inherited methods are not counted.
pub fn wmc(class: &ClassDef, weighting: WmcWeighting) -> usize {
    match weighting {
        WmcWeighting::Unit => class.methods.len(),
        WmcWeighting::Cyclomatic => class.methods.iter().map(|m| 1 + m.decision_points).sum(),
    }
}

/// Depth of inheritance. A root is 0; an external base adds one level and
/// stops the walk.
pub fn dit(class: &ClassDef, model: &ClassModel) -> usize {
    let in_model = model.ancestors(&class.name).count();
    let external = usize::from(model.external_base(&class.name).is_some());
    in_model + external
}

/// Number of immediate subclasses.
pub fn noc(class: &ClassDef, model: &ClassModel) -> usize {
    model.children(&class.name).count()
}

/// Names of every class `class` is coupled to, before inheritance exclusion.
fn referenced_classes(class: &ClassDef) -> BTreeSet<&str> {
    let fields = class
        .fields
        .iter()
        .map(|f| f.declared_type.as_str())
        .filter(|t| !is_primitive(t));
    let receivers = class
        .methods
        .iter()
        .flat_map(|m| m.calls.iter())
        .filter_map(|c| match &c.receiver {
            Receiver::Class(name) => Some(name.as_str()),
            Receiver::SelfRef => None,
        });
    fields.chain(receivers).collect()
}

/// Coupling between objects: distinct classes referenced through field types
/// or call receivers, excluding the class itself and its whole inheritance
/// line (ancestors, external base and descendants).
pub fn cbo(class: &ClassDef, model: &ClassModel) -> usize {
    let mut related: HashSet<&str> = HashSet::new();
    related.insert(class.name.as_str());
    related.extend(model.ancestors(&class.name).map(|c| c.name.as_str()));
    if let Some(ext) = model.external_base(&class.name) {
        related.insert(ext);
    }
    if let Some(p) = class.parent.as_deref() {
        related.insert(p);
    }
    related.extend(
        model
            .descendants(&class.name)
            .into_iter()
            .map(|c| c.name.as_str()),
    );

    referenced_classes(class)
        .into_iter()
        .filter(|n| !related.contains(n))
        .count()
}

/// A method in a response set: declaring class plus signature.
pub type MethodId = (String, Signature);

/// Where a call lands when looked up statically from `start`.
fn resolve_call(model: &ClassModel, start: &str, call: &CallSite) -> MethodId {
    let sig = call.signature();
    let target = match &call.receiver {
        Receiver::SelfRef => start,
        Receiver::Class(name) => name.as_str(),
    };
    if let Some(decl) = model.resolve_method(target, &sig) {
        return (decl.name.clone(), sig);
    }
    match model.external_base(target) {
        Some(ext) => (ext.to_string(), sig),
        None => (target.to_string(), sig),
    }
}

/// Response set of a class: its own methods, inherited methods it does not
/// override, and every method those call directly. Remote calls are followed
/// one level only.
pub fn response_set(class: &ClassDef, model: &ClassModel) -> BTreeSet<MethodId> {
    let mut seen: HashSet<Signature> = HashSet::new();
    let mut rs = BTreeSet::new();
    let mut bodies = Vec::new();
    let chain = std::iter::once(class).chain(model.ancestors(&class.name));
    for owner in chain {
        for m in &owner.methods {
            let sig = m.signature();
            if seen.insert(sig.clone()) {
                rs.insert((owner.name.clone(), sig));
                bodies.push(m);
            }
        }
    }
    for m in bodies {
        for call in &m.calls {
            rs.insert(resolve_call(model, &class.name, call));
        }
    }
    rs
}

pub fn rfc(class: &ClassDef, model: &ClassModel) -> usize {
    response_set(class, model).len()
}

/// Connected components of the method graph, where two methods are joined
/// when they use at least one common field.
pub fn lcom_components(class: &ClassDef) -> usize {
    let n = class.methods.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut first_user: HashMap<&str, usize> = HashMap::new();
    for (i, m) in class.methods.iter().enumerate() {
        for f in &m.field_uses {
            match first_user.get(f.as_str()) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
                None => {
                    first_user.insert(f, i);
                }
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// 100 minus the mean, over declared fields, of the percentage of methods
/// using that field. Classes without methods or fields score 0.
pub fn lcom_percent(class: &ClassDef) -> f64 {
    let methods = class.methods.len();
    let fields = class.fields.len();
    if methods == 0 || fields == 0 {
        return 0.0;
    }
    let total: f64 = class
        .fields
        .iter()
        .map(|f| {
            let users = class
                .methods
                .iter()
                .filter(|m| m.field_uses.contains(&f.name))
                .count();
            100.0 * users as f64 / methods as f64
        })
        .sum();
    (100.0 - total / fields as f64).clamp(0.0, 100.0)
}

pub fn metric_vector(
    class: &ClassDef,
    model: &ClassModel,
    weighting: WmcWeighting,
) -> MetricVector {
    MetricVector {
        wmc: wmc(class, weighting),
        dit: dit(class, model),
        noc: noc(class, model),
        cbo: cbo(class, model),
        rfc: rfc(class, model),
        lcom_components: lcom_components(class),
        lcom_percent: lcom_percent(class),
    }
}

/// Metric vectors for every class, in model order.
pub fn model_metrics(model: &ClassModel, weighting: WmcWeighting) -> Vec<(String, MetricVector)> {
    model
        .classes()
        .iter()
        .map(|c| (c.name.clone(), metric_vector(c, model, weighting)))
        .collect()
}
