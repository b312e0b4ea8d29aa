//! Resolved, immutable object model shared by every metric.
//!
//! A [`ClassModel`] is built once from a list of [`ClassDef`]s (by the parser,
//! the interchange loader, or directly in code) and never mutated afterwards.
//! Construction validates names, resolves inheritance, and marks overriding
//! methods so metric code can stay a set of pure functions.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Built-in MiniOO types. They never count as classes.
pub const PRIMITIVE_TYPES: [&str; 4] = ["void", "int", "bool", "string"];

pub fn is_primitive(name: &str) -> bool {
    PRIMITIVE_TYPES.contains(&name)
}

/// Method identity used throughout: name plus arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub name: String,
    pub arity: usize,
}

impl Signature {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// Target of a method invocation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Receiver {
    /// The enclosing object (`m()` or `this.m()`).
    SelfRef,
    /// A named class, either in the model or external.
    Class(String),
}

impl Receiver {
    pub fn class(name: impl Into<String>) -> Self {
        Receiver::Class(name.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CallSite {
    pub receiver: Receiver,
    pub method: String,
    pub arity: usize,
}

impl CallSite {
    pub fn new(receiver: Receiver, method: impl Into<String>, arity: usize) -> Self {
        Self {
            receiver,
            method: method.into(),
            arity,
        }
    }

    pub fn on_self(method: impl Into<String>, arity: usize) -> Self {
        Self::new(Receiver::SelfRef, method, arity)
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.method.clone(), self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDef {
    pub name: String,
    pub declared_type: String,
}

impl FieldDef {
    pub fn new(name: impl Into<String>, declared_type: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            declared_type: declared_type.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDef {
    pub name: String,
    pub arity: usize,
    /// Occurrences of `if`, `while`, `for` and `case`.
    pub decision_points: usize,
    pub calls: Vec<CallSite>,
    /// Fields of the enclosing class (declared or inherited) the body touches.
    pub field_uses: BTreeSet<String>,
    /// Set by [`build_model`]; any value supplied by the caller is ignored.
    pub overrides: bool,
}

impl MethodDef {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
            decision_points: 0,
            calls: Vec::new(),
            field_uses: BTreeSet::new(),
            overrides: false,
        }
    }

    pub fn with_decision_points(mut self, n: usize) -> Self {
        self.decision_points = n;
        self
    }

    pub fn with_call(mut self, call: CallSite) -> Self {
        self.calls.push(call);
        self
    }

    pub fn with_field_uses<I, S>(mut self, fields: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.field_uses.extend(fields.into_iter().map(Into::into));
        self
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.name.clone(), self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub name: String,
    pub parent: Option<String>,
    pub fields: Vec<FieldDef>,
    pub methods: Vec<MethodDef>,
}

impl ClassDef {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            parent: None,
            fields: Vec::new(),
            methods: Vec::new(),
        }
    }

    pub fn extends(mut self, parent: impl Into<String>) -> Self {
        self.parent = Some(parent.into());
        self
    }

    pub fn with_field(mut self, field: FieldDef) -> Self {
        self.fields.push(field);
        self
    }

    pub fn with_method(mut self, method: MethodDef) -> Self {
        self.methods.push(method);
        self
    }

    pub fn method(&self, sig: &Signature) -> Option<&MethodDef> {
        self.methods
            .iter()
            .find(|m| m.name == sig.name && m.arity == sig.arity)
    }

    pub fn declares(&self, sig: &Signature) -> bool {
        self.method(sig).is_some()
    }

    pub fn field(&self, name: &str) -> Option<&FieldDef> {
        self.fields.iter().find(|f| f.name == name)
    }
}

/// Line and statement counts for a set of source files.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceStats {
    pub files: usize,
    pub lines: usize,
    pub blank: usize,
    pub comment: usize,
    pub code: usize,
    pub executable: usize,
    pub declarative: usize,
}

impl SourceStats {
    /// Comment-only lines per code line; 0 when there is no code.
    pub fn comment_code_ratio(&self) -> f64 {
        if self.code == 0 {
            0.0
        } else {
            self.comment as f64 / self.code as f64
        }
    }
}

impl Add for SourceStats {
    type Output = SourceStats;

    fn add(self, rhs: SourceStats) -> SourceStats {
        SourceStats {
            files: self.files + rhs.files,
            lines: self.lines + rhs.lines,
            blank: self.blank + rhs.blank,
            comment: self.comment + rhs.comment,
            code: self.code + rhs.code,
            executable: self.executable + rhs.executable,
            declarative: self.declarative + rhs.declarative,
        }
    }
}

impl std::iter::Sum for SourceStats {
    fn sum<I: Iterator<Item = SourceStats>>(iter: I) -> SourceStats {
        iter.fold(SourceStats::default(), Add::add)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate class `{0}`")]
    DuplicateClass(String),
    #[error("inheritance cycle through {}", .0.join(" -> "))]
    InheritanceCycle(Vec<String>),
    #[error("class `{class}` extends `{parent}`, which is neither defined nor external")]
    DanglingParent { class: String, parent: String },
    #[error("class `{class}` declares method `{signature}` twice")]
    DuplicateMethod { class: String, signature: Signature },
    #[error("class `{class}` declares field `{field}` twice")]
    DuplicateField { class: String, field: String },
    #[error("method `{class}.{method}` uses `{field}`, which is not a visible field")]
    UnknownFieldUse {
        class: String,
        method: String,
        field: String,
    },
}

/// Validated class graph. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassModel {
    classes: Vec<ClassDef>,
    index: HashMap<String, usize>,
    externals: BTreeSet<String>,
    children: Vec<Vec<usize>>,
    stats: Option<SourceStats>,
}

/// Builds a model from class definitions, a set of names to treat as external
/// classes, and optional source statistics.
///
/// Parents that name an external class are allowed; any other unknown parent
/// is a [`ModelError::DanglingParent`]. Override flags are recomputed.
pub fn build_model<I, S>(
    classes: Vec<ClassDef>,
    externals: I,
    stats: Option<SourceStats>,
) -> Result<ClassModel, ModelError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut index = HashMap::with_capacity(classes.len());
    for (i, c) in classes.iter().enumerate() {
        if index.insert(c.name.clone(), i).is_some() {
            return Err(ModelError::DuplicateClass(c.name.clone()));
        }
    }
    let externals: BTreeSet<String> = externals
        .into_iter()
        .map(Into::into)
        .filter(|n: &String| !index.contains_key(n))
        .collect();

    for c in &classes {
        let mut sigs = HashSet::new();
        for m in &c.methods {
            if !sigs.insert(m.signature()) {
                return Err(ModelError::DuplicateMethod {
                    class: c.name.clone(),
                    signature: m.signature(),
                });
            }
        }
        let mut names = HashSet::new();
        for f in &c.fields {
            if !names.insert(f.name.as_str()) {
                return Err(ModelError::DuplicateField {
                    class: c.name.clone(),
                    field: f.name.clone(),
                });
            }
        }
        if let Some(p) = &c.parent {
            if !index.contains_key(p) && !externals.contains(p) {
                return Err(ModelError::DanglingParent {
                    class: c.name.clone(),
                    parent: p.clone(),
                });
            }
        }
    }

    // Cycle check: walk each chain, bounded by the class count.
    for c in &classes {
        let mut seen = vec![c.name.as_str()];
        let mut cur = c;
        while let Some(p) = cur.parent.as_deref().and_then(|p| index.get(p)) {
            cur = &classes[*p];
            if cur.name == c.name {
                seen.push(cur.name.as_str());
                return Err(ModelError::InheritanceCycle(
                    seen.into_iter().map(String::from).collect(),
                ));
            }
            if seen.contains(&cur.name.as_str()) {
                // Cycle that does not pass through `c`; reported from its own start.
                break;
            }
            seen.push(cur.name.as_str());
        }
    }

    let mut children = vec![Vec::new(); classes.len()];
    for (i, c) in classes.iter().enumerate() {
        if let Some(p) = c.parent.as_deref().and_then(|p| index.get(p)) {
            children[*p].push(i);
        }
    }

    let mut model = ClassModel {
        classes,
        index,
        externals,
        children,
        stats,
    };

    // Override flags and field visibility both need the resolved chain.
    let mut resolved = Vec::with_capacity(model.classes.len());
    for c in &model.classes {
        let ancestors: Vec<&ClassDef> = model.ancestors(&c.name).collect();
        let visible: HashSet<&str> = c
            .fields
            .iter()
            .chain(ancestors.iter().flat_map(|a| a.fields.iter()))
            .map(|f| f.name.as_str())
            .collect();
        let mut flags = Vec::with_capacity(c.methods.len());
        for m in &c.methods {
            if let Some(field) = m.field_uses.iter().find(|f| !visible.contains(f.as_str())) {
                return Err(ModelError::UnknownFieldUse {
                    class: c.name.clone(),
                    method: m.name.clone(),
                    field: field.clone(),
                });
            }
            let sig = m.signature();
            flags.push(ancestors.iter().any(|a| a.declares(&sig)));
        }
        resolved.push(flags);
    }
    for (c, flags) in model.classes.iter_mut().zip(resolved) {
        for (m, o) in c.methods.iter_mut().zip(flags) {
            m.overrides = o;
        }
    }
    Ok(model)
}

impl ClassModel {
    pub fn empty() -> Self {
        build_model(Vec::new(), Vec::<String>::new(), None).expect("empty model is valid")
    }

    pub fn classes(&self) -> &[ClassDef] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&ClassDef> {
        self.index.get(name).map(|&i| &self.classes[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn externals(&self) -> &BTreeSet<String> {
        &self.externals
    }

    pub fn is_external(&self, name: &str) -> bool {
        self.externals.contains(name)
    }

    pub fn stats(&self) -> Option<&SourceStats> {
        self.stats.as_ref()
    }

    /// In-model ancestors, nearest first. An external base ends the walk.
    pub fn ancestors<'a>(&'a self, name: &str) -> impl Iterator<Item = &'a ClassDef> + 'a {
        let start = self.get(name).and_then(|c| c.parent.clone());
        let mut next = start;
        std::iter::from_fn(move || {
            let cur = self.get(next.as_deref()?)?;
            next = cur.parent.clone();
            Some(cur)
        })
    }

    /// External class terminating the inheritance chain of `name`, if any.
    pub fn external_base(&self, name: &str) -> Option<&str> {
        let last = self.ancestors(name).last().or_else(|| self.get(name))?;
        match last.parent.as_deref() {
            Some(p) if self.is_external(p) => self.externals.get(p).map(String::as_str),
            _ => None,
        }
    }

    /// Immediate in-model subclasses, in model order.
    pub fn children<'a>(&'a self, name: &str) -> impl Iterator<Item = &'a ClassDef> + 'a {
        self.index
            .get(name)
            .map(|&i| self.children[i].as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&i| &self.classes[i])
    }

    /// All in-model subclasses, transitively.
    pub fn descendants(&self, name: &str) -> Vec<&ClassDef> {
        let mut out = Vec::new();
        let mut stack: Vec<&ClassDef> = self.children(name).collect();
        while let Some(c) = stack.pop() {
            out.push(c);
            stack.extend(self.children(&c.name));
        }
        out
    }

    /// Innermost class in `name`'s chain (itself first) declaring `sig`.
    pub fn resolve_method(&self, name: &str, sig: &Signature) -> Option<&ClassDef> {
        self.get(name)
            .into_iter()
            .chain(self.ancestors(name))
            .find(|c| c.declares(sig))
    }

    /// Returns a new model with `class` appended.
    pub fn with_class(&self, class: ClassDef) -> Result<ClassModel, ModelError> {
        let mut classes = self.classes.clone();
        classes.push(class);
        build_model(classes, self.externals.iter().cloned(), self.stats)
    }

    /// Merges two models; class names must not collide.
    pub fn merge(&self, other: &ClassModel) -> Result<ClassModel, ModelError> {
        let classes = self
            .classes
            .iter()
            .chain(other.classes.iter())
            .cloned()
            .collect();
        let externals = self.externals.iter().chain(other.externals.iter()).cloned();
        let stats = match (self.stats, other.stats) {
            (Some(a), Some(b)) => Some(a + b),
            (a, b) => a.or(b),
        };
        build_model(classes, externals, stats)
    }
}

/// Name used for the combination of two classes.
pub fn combined_name(p: &str, q: &str) -> String {
    format!("{p}+{q}")
}

/// Signature-keyed union of two classes.
///
/// Methods are matched by name and arity; on a collision `p`'s decision
/// points are kept and calls and field uses are unioned. Fields are matched
/// by name with `p`'s declaration winning. The result inherits `p`'s parent.
pub fn combine(p: &ClassDef, q: &ClassDef) -> ClassDef {
    let mut methods: Vec<MethodDef> = p.methods.clone();
    let mut by_sig: BTreeMap<Signature, usize> = methods
        .iter()
        .enumerate()
        .map(|(i, m)| (m.signature(), i))
        .collect();
    for m in &q.methods {
        match by_sig.get(&m.signature()) {
            Some(&i) => {
                let target = &mut methods[i];
                for call in &m.calls {
                    if !target.calls.contains(call) {
                        target.calls.push(call.clone());
                    }
                }
                target.field_uses.extend(m.field_uses.iter().cloned());
            }
            None => {
                by_sig.insert(m.signature(), methods.len());
                methods.push(m.clone());
            }
        }
    }
    for m in &mut methods {
        m.overrides = false;
    }

    let mut fields = p.fields.clone();
    for f in &q.fields {
        if !fields.iter().any(|g| g.name == f.name) {
            fields.push(f.clone());
        }
    }

    ClassDef {
        name: combined_name(&p.name, &q.name),
        parent: p.parent.clone(),
        fields,
        methods,
    }
}
