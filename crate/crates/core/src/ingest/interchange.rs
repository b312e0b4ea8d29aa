//! Language-neutral JSON form of a [`ClassModel`].
//!
//! ```json
//! {
//!   "classes": [
//!     {
//!       "name": "B", "parent": "A",
//!       "fields": [{"name": "x", "type": "int"}],
//!       "methods": [{
//!         "name": "m", "arity": 0, "decision_points": 1,
//!         "calls": [{"receiver": "SELF", "method": "n", "arity": 0}],
//!         "field_uses": ["x"]
//!       }]
//!     }
//!   ],
//!   "externals": ["Object"],
//!   "stats": {"files": 1, "lines": 10, "blank": 2, "comment": 1, "code": 7,
//!             "executable": 3, "declarative": 2}
//! }
//! ```
//!
//! `parent`, `externals` and `stats` are optional. Unknown keys are rejected.
//! The receiver name `SELF` denotes the enclosing object.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    build_model, CallSite, ClassDef, ClassModel, FieldDef, MethodDef, ModelError, Receiver,
    SourceStats,
};

pub const SELF_RECEIVER: &str = "SELF";

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("interchange schema error: {0}")]
    Schema(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    classes: Vec<ClassDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    externals: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stats: Option<SourceStats>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent: Option<String>,
    fields: Vec<FieldDoc>,
    methods: Vec<MethodDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDoc {
    name: String,
    #[serde(rename = "type")]
    declared_type: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MethodDoc {
    name: String,
    arity: usize,
    decision_points: usize,
    calls: Vec<CallDoc>,
    field_uses: BTreeSet<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CallDoc {
    receiver: String,
    method: String,
    arity: usize,
}

fn to_doc(model: &ClassModel) -> Document {
    let classes = model
        .classes()
        .iter()
        .map(|c| ClassDoc {
            name: c.name.clone(),
            parent: c.parent.clone(),
            fields: c
                .fields
                .iter()
                .map(|f| FieldDoc {
                    name: f.name.clone(),
                    declared_type: f.declared_type.clone(),
                })
                .collect(),
            methods: c
                .methods
                .iter()
                .map(|m| MethodDoc {
                    name: m.name.clone(),
                    arity: m.arity,
                    decision_points: m.decision_points,
                    calls: m
                        .calls
                        .iter()
                        .map(|call| CallDoc {
                            receiver: match &call.receiver {
                                Receiver::SelfRef => SELF_RECEIVER.to_string(),
                                Receiver::Class(n) => n.clone(),
                            },
                            method: call.method.clone(),
                            arity: call.arity,
                        })
                        .collect(),
                    field_uses: m.field_uses.clone(),
                })
                .collect(),
        })
        .collect();
    Document {
        classes,
        externals: model.externals().iter().cloned().collect(),
        stats: model.stats().copied(),
    }
}

fn from_doc(doc: Document) -> Result<ClassModel, ModelError> {
    let classes = doc
        .classes
        .into_iter()
        .map(|c| ClassDef {
            name: c.name,
            parent: c.parent,
            fields: c
                .fields
                .into_iter()
                .map(|f| FieldDef::new(f.name, f.declared_type))
                .collect(),
            methods: c
                .methods
                .into_iter()
                .map(|m| MethodDef {
                    name: m.name,
                    arity: m.arity,
                    decision_points: m.decision_points,
                    calls: m
                        .calls
                        .into_iter()
                        .map(|call| {
                            let receiver = if call.receiver == SELF_RECEIVER {
                                Receiver::SelfRef
                            } else {
                                Receiver::Class(call.receiver)
                            };
                            CallSite::new(receiver, call.method, call.arity)
                        })
                        .collect(),
                    field_uses: m.field_uses,
                    overrides: false,
                })
                .collect(),
        })
        .collect();
    build_model(classes, doc.externals, doc.stats)
}

/// Pretty-printed interchange JSON, newline-terminated. Deterministic.
pub fn to_interchange_string(model: &ClassModel) -> String {
    let mut s = serde_json::to_string_pretty(&to_doc(model)).expect("document serializes");
    s.push('\n');
    s
}

pub fn from_interchange_str(text: &str) -> Result<ClassModel, InterchangeError> {
    let doc: Document = serde_json::from_str(text)?;
    Ok(from_doc(doc)?)
}

pub fn load_interchange(path: impl AsRef<Path>) -> Result<ClassModel, InterchangeError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| InterchangeError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_interchange_str(&text)
}

pub fn dump_interchange(
    model: &ClassModel,
    path: impl AsRef<Path>,
) -> Result<(), InterchangeError> {
    let path = path.as_ref();
    std::fs::write(path, to_interchange_string(model)).map_err(|source| InterchangeError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_classes() -> ClassModel {
        build_model(
            vec![
                ClassDef::new("A")
                    .with_field(FieldDef::new("x", "int"))
                    .with_method(
                        MethodDef::new("m", 1)
                            .with_decision_points(2)
                            .with_field_uses(["x"])
                            .with_call(CallSite::new(Receiver::class("Util"), "f", 0)),
                    ),
                ClassDef::new("B")
                    .extends("A")
                    .with_method(MethodDef::new("m", 1).with_call(CallSite::on_self("m", 1))),
            ],
            ["Util"],
            None,
        )
        .unwrap()
    }

    #[test]
    fn round_trips_to_equal_model() {
        let model = two_classes();
        let text = to_interchange_string(&model);
        assert_eq!(from_interchange_str(&text).unwrap(), model);
        // Byte-stable on repeated dumps.
        assert_eq!(
            to_interchange_string(&from_interchange_str(&text).unwrap()),
            text
        );
    }

    #[test]
    fn empty_model_dumps_empty_class_list() {
        let text = to_interchange_string(&ClassModel::empty());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v, serde_json::json!({"classes": []}));
    }

    #[test]
    fn schema_errors() {
        let missing_name = r#"{"classes":[{"fields":[],"methods":[]}]}"#;
        assert!(matches!(
            from_interchange_str(missing_name),
            Err(InterchangeError::Schema(_))
        ));
        let unknown_key = r#"{"classes":[{"name":"A","fields":[],"methods":[],"abstract":true}]}"#;
        assert!(matches!(
            from_interchange_str(unknown_key),
            Err(InterchangeError::Schema(_))
        ));
        let wrong_kind = r#"{"classes":[{"name":"A","fields":[],"methods":[{"name":"m","arity":"0","decision_points":0,"calls":[],"field_uses":[]}]}]}"#;
        assert!(matches!(
            from_interchange_str(wrong_kind),
            Err(InterchangeError::Schema(_))
        ));
    }

    #[test]
    fn model_errors_surface() {
        let dangling = r#"{"classes":[{"name":"A","parent":"Z","fields":[],"methods":[]}]}"#;
        assert!(matches!(
            from_interchange_str(dangling),
            Err(InterchangeError::Model(ModelError::DanglingParent { .. }))
        ));
        let ok =
            r#"{"classes":[{"name":"A","parent":"Z","fields":[],"methods":[]}],"externals":["Z"]}"#;
        assert!(from_interchange_str(ok).is_ok());
    }
}
