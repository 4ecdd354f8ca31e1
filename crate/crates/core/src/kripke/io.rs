//! JSON and DOT encodings of pointed models.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{PointedModel, PropSet};
use crate::error::{Error, Result};
use crate::formula::PropSignature;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub id: String,
    pub props: Vec<String>,
}

/// Wire form: `{"signature":[..], "states":[{"id":..,"props":[..]}], "edges":[[a,b]], "point":..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub signature: Vec<String>,
    pub states: Vec<StateJson>,
    pub edges: Vec<(String, String)>,
    pub point: String,
}

impl From<&PointedModel> for ModelJson {
    fn from(m: &PointedModel) -> Self {
        let sig = m.signature();
        ModelJson {
            signature: sig.iter().map(str::to_string).collect(),
            states: (0..m.len())
                .map(|s| StateJson {
                    id: m.id(s).to_string(),
                    props: m.label(s).names(sig).into_iter().map(str::to_string).collect(),
                })
                .collect(),
            edges: m.edges().map(|(a, b)| (m.id(a).to_string(), m.id(b).to_string())).collect(),
            point: m.id(m.point()).to_string(),
        }
    }
}

impl TryFrom<ModelJson> for PointedModel {
    type Error = Error;

    fn try_from(j: ModelJson) -> Result<Self> {
        let sig = PropSignature::new(j.signature)?;
        let mut ids = Vec::with_capacity(j.states.len());
        let mut labels = Vec::with_capacity(j.states.len());
        for st in &j.states {
            ids.push(st.id.clone());
            labels.push(PropSet::from_names(&sig, st.props.iter().map(String::as_str))?);
        }
        let index = |id: &str| {
            ids.iter().position(|x| x == id).ok_or_else(|| Error::InvalidModel(format!("unknown state id `{id}`")))
        };
        let edges = j.edges.iter().map(|(a, b)| Ok((index(a)?, index(b)?))).collect::<Result<Vec<_>>>()?;
        let point = index(&j.point)?;
        PointedModel::new(sig, ids.clone(), labels, edges, point)
    }
}

pub fn read_model(text: &str) -> Result<PointedModel> {
    let j: ModelJson = serde_json::from_str(text)?;
    PointedModel::try_from(j)
}

pub fn write_model(m: &PointedModel) -> String {
    serde_json::to_string_pretty(&ModelJson::from(m)).expect("model JSON is always serialisable")
}

pub(super) fn to_dot(m: &PointedModel) -> String {
    let sig = m.signature();
    let mut out = String::from("digraph model {\n  node [shape=circle];\n");
    for s in 0..m.len() {
        let props = m.label(s).names(sig).join(",");
        let shape = if s == m.point() { ", shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  n{s} [label=\"{} {{{}}}\"{shape}];", escape(m.id(s)), props);
    }
    for (a, b) in m.edges() {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_documented_shape() {
        let text = r#"{"signature":["p","q"],"states":[{"id":"s0","props":["p"]},{"id":"s1","props":[]}],
                       "edges":[["s0","s1"]],"point":"s0"}"#;
        let m = read_model(text).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.label(0), PropSet(1));
        assert!(m.has_edge(0, 1));
        assert_eq!(read_model(&write_model(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_bad_input() {
        let extra = r#"{"signature":[],"states":[{"id":"a","props":[]}],"edges":[],"point":"a","x":1}"#;
        assert!(matches!(read_model(extra), Err(Error::Json(_))));
        let unknown_prop = r#"{"signature":["p"],"states":[{"id":"a","props":["q"]}],"edges":[],"point":"a"}"#;
        assert!(matches!(read_model(unknown_prop), Err(Error::UnknownProp(_))));
        let dangling = r#"{"signature":[],"states":[{"id":"a","props":[]}],"edges":[["a","b"]],"point":"a"}"#;
        assert!(matches!(read_model(dangling), Err(Error::InvalidModel(_))));
        let no_point = r#"{"signature":[],"states":[{"id":"a","props":[]}],"edges":[],"point":"z"}"#;
        assert!(read_model(no_point).is_err());
    }

    #[test]
    fn dot_marks_point() {
        let sig = PropSignature::new(["p"]).unwrap();
        let m = PointedModel::glue(&sig, PropSet(1), &[PointedModel::empty_loop(&sig)]).unwrap();
        let dot = m.to_dot();
        assert!(dot.contains("n0 [label=\"r {p}\", shape=doublecircle];"));
        assert!(dot.contains("n1 [label=\"0.o {}\"];"));
        assert!(dot.contains("n1 -> n1;"));
    }
}
