//! ACVP vector-set and response-set data model.
//!
//! Documents are UTF-8 JSON. Both the official flat layout and the
//! recursive-subgroup extension are accepted on input; serialization is
//! canonical (identifier keys first, remaining keys alphabetical) so
//! fixtures are deterministic. The official array wrapper around a vector
//! set is accepted on input; output is always a bare object.

use std::collections::{BTreeMap, HashSet};

use serde_json::{Map as JsonMap, Value};
use thiserror::Error;

/// Maximum subgroup nesting depth accepted by the parser and expander.
pub const MAX_GROUP_DEPTH: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("JSON syntax error at byte offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("missing required field `{name}` in {context}")]
    MissingField { name: &'static str, context: String },
    #[error("field `{name}` in {context} has the wrong type: {detail}")]
    BadField { name: String, context: String, detail: String },
    #[error("duplicate tgId {0}")]
    DuplicateTgId(u64),
    #[error("duplicate tcId {0}")]
    DuplicateTcId(u64),
    #[error("group nesting depth exceeds the limit of {MAX_GROUP_DEPTH}")]
    DepthLimit,
    #[error("unknown tcId {0}")]
    UnknownTcId(u64),
    #[error("unsupported JSON value in {context}: {detail}")]
    UnsupportedValue { context: String, detail: String },
}

/// A single field carried by a vector set, group, case or response result.
///
/// `HexBytes` compares equal to a `Text` value holding the same bytes as
/// case-insensitive hex, so values survive the text encoding of the wire
/// format without loss.
#[derive(Debug, Clone)]
pub enum FieldValue {
    Int(u64),
    Bool(bool),
    Text(String),
    HexBytes(Vec<u8>),
    Map(BTreeMap<String, FieldValue>),
    List(Vec<FieldValue>),
}

impl PartialEq for FieldValue {
    fn eq(&self, other: &Self) -> bool {
        use FieldValue::*;
        match (self, other) {
            (Int(a), Int(b)) => a == b,
            (Bool(a), Bool(b)) => a == b,
            (Text(a), Text(b)) => a == b,
            (HexBytes(a), HexBytes(b)) => a == b,
            (HexBytes(b), Text(s)) | (Text(s), HexBytes(b)) => hex_equiv(s, b),
            (Map(a), Map(b)) => a == b,
            (List(a), List(b)) => a == b,
            _ => false,
        }
    }
}

fn hex_equiv(s: &str, b: &[u8]) -> bool {
    s.len() == b.len() * 2 && hex::decode(s).map_or(false, |d| d == b)
}

impl FieldValue {
    /// Interpret the value as a byte string: either `HexBytes` directly or
    /// `Text` holding hex in either case.
    pub fn as_bytes(&self) -> Option<Vec<u8>> {
        match self {
            FieldValue::HexBytes(b) => Some(b.clone()),
            FieldValue::Text(s) => hex::decode(s).ok(),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<u64> {
        match self {
            FieldValue::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            FieldValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            FieldValue::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_map(&self) -> Option<&BTreeMap<String, FieldValue>> {
        match self {
            FieldValue::Map(m) => Some(m),
            _ => None,
        }
    }
}

pub type FieldMap = BTreeMap<String, FieldValue>;

#[derive(Debug, Clone, PartialEq)]
pub struct VectorSet {
    pub vs_id: u64,
    pub algorithm: String,
    pub mode: Option<String>,
    pub revision: String,
    pub shared_fields: FieldMap,
    pub groups: Vec<TestGroup>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestGroup {
    pub tg_id: u64,
    pub test_type: Option<String>,
    pub shared_fields: FieldMap,
    pub tests: Vec<TestCase>,
    pub subgroups: Vec<TestGroup>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestCase {
    pub tc_id: u64,
    pub fields: FieldMap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseSet {
    pub vs_id: u64,
    pub results: Vec<(u64, FieldMap)>,
}

// ---------------------------------------------------------------------------
// Parsing

pub fn parse_vector_set(text: &str) -> Result<VectorSet, ModelError> {
    let value = parse_json(text)?;
    let obj = unwrap_vector_set_document(value)?;
    let vs = vector_set_from_object(obj)?;
    check_unique_ids(&vs)?;
    Ok(vs)
}

fn parse_json(text: &str) -> Result<Value, ModelError> {
    serde_json::from_str::<Value>(text).map_err(|e| ModelError::Syntax {
        offset: offset_of(text, e.line(), e.column()),
        message: e.to_string(),
    })
}

fn offset_of(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in text.split('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len() + 1;
    }
    text.len()
}

/// Accept both a bare vector-set object and the official array wrapper
/// (version object followed by the vector set).
fn unwrap_vector_set_document(value: Value) -> Result<JsonMap<String, Value>, ModelError> {
    match value {
        Value::Object(obj) => Ok(obj),
        Value::Array(items) => items
            .into_iter()
            .filter_map(|v| match v {
                Value::Object(o) if o.contains_key("vsId") => Some(o),
                _ => None,
            })
            .next()
            .ok_or(ModelError::MissingField { name: "vsId", context: "document array".into() }),
        other => Err(ModelError::UnsupportedValue {
            context: "document root".into(),
            detail: format!("expected object or array, found {}", json_kind(&other)),
        }),
    }
}

fn json_kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn vector_set_from_object(mut obj: JsonMap<String, Value>) -> Result<VectorSet, ModelError> {
    let ctx = "vector set";
    let vs_id = take_u64(&mut obj, "vsId", ctx)?;
    let algorithm = take_string(&mut obj, "algorithm", ctx)?;
    if algorithm.is_empty() {
        return Err(ModelError::BadField {
            name: "algorithm".into(),
            context: ctx.into(),
            detail: "must be non-empty".into(),
        });
    }
    let mode = take_opt_string(&mut obj, "mode", ctx)?;
    let revision = take_string(&mut obj, "revision", ctx)?;
    let groups_value = obj
        .remove("testGroups")
        .ok_or(ModelError::MissingField { name: "testGroups", context: ctx.into() })?;
    let groups = match groups_value {
        Value::Array(items) => items
            .into_iter()
            .map(|v| group_from_value(v, 1))
            .collect::<Result<Vec<_>, _>>()?,
        other => {
            return Err(ModelError::BadField {
                name: "testGroups".into(),
                context: ctx.into(),
                detail: format!("expected array, found {}", json_kind(&other)),
            })
        }
    };
    let shared_fields = field_map_from_object(obj, ctx)?;
    Ok(VectorSet { vs_id, algorithm, mode, revision, shared_fields, groups })
}

fn group_from_value(value: Value, depth: usize) -> Result<TestGroup, ModelError> {
    if depth > MAX_GROUP_DEPTH {
        return Err(ModelError::DepthLimit);
    }
    let mut obj = match value {
        Value::Object(o) => o,
        other => {
            return Err(ModelError::UnsupportedValue {
                context: "testGroups".into(),
                detail: format!("expected object, found {}", json_kind(&other)),
            })
        }
    };
    let tg_id = take_u64(&mut obj, "tgId", "test group")?;
    let ctx = format!("test group {tg_id}");
    let test_type = take_opt_string(&mut obj, "testType", &ctx)?;
    let tests = match obj.remove("tests") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .into_iter()
            .map(case_from_value)
            .collect::<Result<Vec<_>, _>>()?,
        Some(other) => {
            return Err(ModelError::BadField {
                name: "tests".into(),
                context: ctx,
                detail: format!("expected array, found {}", json_kind(&other)),
            })
        }
    };
    let subgroups = match obj.remove("subgroups") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .into_iter()
            .map(|v| group_from_value(v, depth + 1))
            .collect::<Result<Vec<_>, _>>()?,
        Some(other) => {
            return Err(ModelError::BadField {
                name: "subgroups".into(),
                context: ctx,
                detail: format!("expected array, found {}", json_kind(&other)),
            })
        }
    };
    let shared_fields = field_map_from_object(obj, &format!("test group {tg_id}"))?;
    Ok(TestGroup { tg_id, test_type, shared_fields, tests, subgroups })
}

fn case_from_value(value: Value) -> Result<TestCase, ModelError> {
    let mut obj = match value {
        Value::Object(o) => o,
        other => {
            return Err(ModelError::UnsupportedValue {
                context: "tests".into(),
                detail: format!("expected object, found {}", json_kind(&other)),
            })
        }
    };
    let tc_id = take_u64(&mut obj, "tcId", "test case")?;
    let fields = field_map_from_object(obj, &format!("test case {tc_id}"))?;
    Ok(TestCase { tc_id, fields })
}

fn field_map_from_object(
    obj: JsonMap<String, Value>,
    context: &str,
) -> Result<FieldMap, ModelError> {
    let mut map = BTreeMap::new();
    for (k, v) in obj {
        map.insert(k, field_value_from_json(v, context)?);
    }
    Ok(map)
}

fn field_value_from_json(value: Value, context: &str) -> Result<FieldValue, ModelError> {
    match value {
        Value::Bool(b) => Ok(FieldValue::Bool(b)),
        Value::Number(n) => n.as_u64().map(FieldValue::Int).ok_or_else(|| {
            ModelError::UnsupportedValue {
                context: context.into(),
                detail: format!("number {n} does not fit an unsigned 64-bit integer"),
            }
        }),
        Value::String(s) => Ok(FieldValue::Text(s)),
        Value::Array(items) => Ok(FieldValue::List(
            items
                .into_iter()
                .map(|v| field_value_from_json(v, context))
                .collect::<Result<Vec<_>, _>>()?,
        )),
        Value::Object(obj) => Ok(FieldValue::Map(field_map_from_object(obj, context)?)),
        Value::Null => Err(ModelError::UnsupportedValue {
            context: context.into(),
            detail: "null values are not representable".into(),
        }),
    }
}

fn take_u64(obj: &mut JsonMap<String, Value>, name: &'static str, ctx: &str) -> Result<u64, ModelError> {
    let v = obj
        .remove(name)
        .ok_or(ModelError::MissingField { name, context: ctx.into() })?;
    v.as_u64().ok_or_else(|| ModelError::BadField {
        name: name.into(),
        context: ctx.into(),
        detail: format!("expected unsigned integer, found {}", json_kind(&v)),
    })
}

fn take_string(
    obj: &mut JsonMap<String, Value>,
    name: &'static str,
    ctx: &str,
) -> Result<String, ModelError> {
    let v = obj
        .remove(name)
        .ok_or(ModelError::MissingField { name, context: ctx.into() })?;
    match v {
        Value::String(s) => Ok(s),
        other => Err(ModelError::BadField {
            name: name.into(),
            context: ctx.into(),
            detail: format!("expected string, found {}", json_kind(&other)),
        }),
    }
}

fn take_opt_string(
    obj: &mut JsonMap<String, Value>,
    name: &'static str,
    ctx: &str,
) -> Result<Option<String>, ModelError> {
    match obj.remove(name) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(other) => Err(ModelError::BadField {
            name: name.into(),
            context: ctx.into(),
            detail: format!("expected string, found {}", json_kind(&other)),
        }),
    }
}

fn check_unique_ids(vs: &VectorSet) -> Result<(), ModelError> {
    let mut tg_ids = HashSet::new();
    let mut tc_ids = HashSet::new();
    fn walk(
        group: &TestGroup,
        tg_ids: &mut HashSet<u64>,
        tc_ids: &mut HashSet<u64>,
    ) -> Result<(), ModelError> {
        if !tg_ids.insert(group.tg_id) {
            return Err(ModelError::DuplicateTgId(group.tg_id));
        }
        for case in &group.tests {
            if !tc_ids.insert(case.tc_id) {
                return Err(ModelError::DuplicateTcId(case.tc_id));
            }
        }
        for sub in &group.subgroups {
            walk(sub, tg_ids, tc_ids)?;
        }
        Ok(())
    }
    for group in &vs.groups {
        walk(group, &mut tg_ids, &mut tc_ids)?;
    }
    Ok(())
}

pub fn parse_response_set(text: &str) -> Result<ResponseSet, ModelError> {
    let value = parse_json(text)?;
    let mut obj = match value {
        Value::Object(o) => o,
        Value::Array(items) => items
            .into_iter()
            .filter_map(|v| match v {
                Value::Object(o) if o.contains_key("vsId") => Some(o),
                _ => None,
            })
            .next()
            .ok_or(ModelError::MissingField { name: "vsId", context: "document array".into() })?,
        other => {
            return Err(ModelError::UnsupportedValue {
                context: "document root".into(),
                detail: format!("expected object or array, found {}", json_kind(&other)),
            })
        }
    };
    let ctx = "response set";
    let vs_id = take_u64(&mut obj, "vsId", ctx)?;
    let results_value = obj
        .remove("testResults")
        .ok_or(ModelError::MissingField { name: "testResults", context: ctx.into() })?;
    let items = match results_value {
        Value::Array(items) => items,
        other => {
            return Err(ModelError::BadField {
                name: "testResults".into(),
                context: ctx.into(),
                detail: format!("expected array, found {}", json_kind(&other)),
            })
        }
    };
    let mut seen = HashSet::new();
    let mut results = Vec::with_capacity(items.len());
    for item in items {
        let mut obj = match item {
            Value::Object(o) => o,
            other => {
                return Err(ModelError::UnsupportedValue {
                    context: "testResults".into(),
                    detail: format!("expected object, found {}", json_kind(&other)),
                })
            }
        };
        let tc_id = take_u64(&mut obj, "tcId", "test result")?;
        if !seen.insert(tc_id) {
            return Err(ModelError::DuplicateTcId(tc_id));
        }
        results.push((tc_id, field_map_from_object(obj, &format!("test result {tc_id}"))?));
    }
    Ok(ResponseSet { vs_id, results })
}

// ---------------------------------------------------------------------------
// Serialization

pub fn serialize_vector_set(vs: &VectorSet) -> String {
    let mut obj = JsonMap::new();
    obj.insert("vsId".into(), Value::from(vs.vs_id));
    obj.insert("algorithm".into(), Value::from(vs.algorithm.clone()));
    if let Some(mode) = &vs.mode {
        obj.insert("mode".into(), Value::from(mode.clone()));
    }
    obj.insert("revision".into(), Value::from(vs.revision.clone()));
    insert_fields(&mut obj, &vs.shared_fields);
    obj.insert(
        "testGroups".into(),
        Value::Array(vs.groups.iter().map(group_to_json).collect()),
    );
    serde_json::to_string_pretty(&Value::Object(obj)).expect("in-memory serialization")
}

fn group_to_json(group: &TestGroup) -> Value {
    let mut obj = JsonMap::new();
    obj.insert("tgId".into(), Value::from(group.tg_id));
    if let Some(tt) = &group.test_type {
        obj.insert("testType".into(), Value::from(tt.clone()));
    }
    insert_fields(&mut obj, &group.shared_fields);
    if !group.tests.is_empty() || group.subgroups.is_empty() {
        obj.insert(
            "tests".into(),
            Value::Array(group.tests.iter().map(case_to_json).collect()),
        );
    }
    if !group.subgroups.is_empty() {
        obj.insert(
            "subgroups".into(),
            Value::Array(group.subgroups.iter().map(group_to_json).collect()),
        );
    }
    Value::Object(obj)
}

fn case_to_json(case: &TestCase) -> Value {
    let mut obj = JsonMap::new();
    obj.insert("tcId".into(), Value::from(case.tc_id));
    insert_fields(&mut obj, &case.fields);
    Value::Object(obj)
}

fn insert_fields(obj: &mut JsonMap<String, Value>, fields: &FieldMap) {
    for (k, v) in fields {
        obj.insert(k.clone(), field_value_to_json(v));
    }
}

pub fn field_value_to_json(value: &FieldValue) -> Value {
    match value {
        FieldValue::Int(v) => Value::from(*v),
        FieldValue::Bool(b) => Value::from(*b),
        FieldValue::Text(s) => Value::from(s.clone()),
        FieldValue::HexBytes(b) => Value::from(hex::encode_upper(b)),
        FieldValue::Map(m) => {
            let mut obj = JsonMap::new();
            insert_fields(&mut obj, m);
            Value::Object(obj)
        }
        FieldValue::List(items) => Value::Array(items.iter().map(field_value_to_json).collect()),
    }
}

pub fn serialize_response_set(rs: &ResponseSet) -> String {
    let mut obj = JsonMap::new();
    obj.insert("vsId".into(), Value::from(rs.vs_id));
    let results: Vec<Value> = rs
        .results
        .iter()
        .map(|(tc_id, fields)| {
            let mut o = JsonMap::new();
            o.insert("tcId".into(), Value::from(*tc_id));
            insert_fields(&mut o, fields);
            Value::Object(o)
        })
        .collect();
    obj.insert("testResults".into(), Value::Array(results));
    serde_json::to_string_pretty(&Value::Object(obj)).expect("in-memory serialization")
}

// ---------------------------------------------------------------------------
// Group expansion and field resolution

/// Flatten recursive subgroups and push every shared field down into the
/// test cases. Resolution is nearest-wins: case over innermost group over
/// outer groups over the vector set.
pub fn expand_groups(vs: &VectorSet) -> Result<VectorSet, ModelError> {
    let mut flat = Vec::new();
    for group in &vs.groups {
        expand_group(group, &vs.shared_fields, 1, &mut flat)?;
    }
    Ok(VectorSet {
        vs_id: vs.vs_id,
        algorithm: vs.algorithm.clone(),
        mode: vs.mode.clone(),
        revision: vs.revision.clone(),
        shared_fields: BTreeMap::new(),
        groups: flat,
    })
}

fn expand_group(
    group: &TestGroup,
    inherited: &FieldMap,
    depth: usize,
    out: &mut Vec<TestGroup>,
) -> Result<(), ModelError> {
    if depth > MAX_GROUP_DEPTH {
        return Err(ModelError::DepthLimit);
    }
    let mut merged = inherited.clone();
    for (k, v) in &group.shared_fields {
        merged.insert(k.clone(), v.clone());
    }
    if !group.tests.is_empty() || group.subgroups.is_empty() {
        let tests = group
            .tests
            .iter()
            .map(|case| {
                let mut fields = merged.clone();
                for (k, v) in &case.fields {
                    fields.insert(k.clone(), v.clone());
                }
                TestCase { tc_id: case.tc_id, fields }
            })
            .collect();
        out.push(TestGroup {
            tg_id: group.tg_id,
            test_type: group.test_type.clone(),
            shared_fields: BTreeMap::new(),
            tests,
            subgroups: Vec::new(),
        });
    }
    for sub in &group.subgroups {
        expand_group(sub, &merged, depth + 1, out)?;
    }
    Ok(())
}

/// Nearest-enclosing definition of `name` for the given test case, or `None`
/// when the field is absent at every level.
pub fn resolve_field<'a>(
    vs: &'a VectorSet,
    tc_id: u64,
    name: &str,
) -> Result<Option<&'a FieldValue>, ModelError> {
    fn find<'a>(
        groups: &'a [TestGroup],
        tc_id: u64,
        name: &str,
        chain: &mut Vec<&'a FieldMap>,
    ) -> Option<Option<&'a FieldValue>> {
        for group in groups {
            chain.push(&group.shared_fields);
            for case in &group.tests {
                if case.tc_id == tc_id {
                    let hit = case
                        .fields
                        .get(name)
                        .or_else(|| chain.iter().rev().find_map(|m| m.get(name)));
                    return Some(hit);
                }
            }
            if let Some(found) = find(&group.subgroups, tc_id, name, chain) {
                return Some(found);
            }
            chain.pop();
        }
        None
    }
    let mut chain: Vec<&FieldMap> = vec![&vs.shared_fields];
    find(&vs.groups, tc_id, name, &mut chain).ok_or(ModelError::UnknownTcId(tc_id))
}

/// All test cases of a vector set in document order, with fully resolved
/// field maps (equivalent to `expand_groups` output).
pub fn resolved_cases(vs: &VectorSet) -> Result<Vec<TestCase>, ModelError> {
    let expanded = expand_groups(vs)?;
    Ok(expanded.groups.into_iter().flat_map(|g| g.tests).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"vsId":1,"algorithm":"SHA2-256","revision":"1.0","testGroups":[]}"#;

    #[test]
    fn parse_minimal() {
        let vs = parse_vector_set(MINIMAL).unwrap();
        assert_eq!(vs.vs_id, 1);
        assert_eq!(vs.algorithm, "SHA2-256");
        assert!(vs.groups.is_empty());
    }

    #[test]
    fn truncated_document_reports_offset() {
        let text = r#"{"vsId":1,"algorithm":"SHA2-2"#;
        match parse_vector_set(text) {
            Err(ModelError::Syntax { offset, .. }) => assert!(offset > 0 && offset <= text.len()),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn missing_required_fields() {
        assert!(matches!(
            parse_vector_set(r#"{"algorithm":"SHA2-256","revision":"1.0","testGroups":[]}"#),
            Err(ModelError::MissingField { name: "vsId", .. })
        ));
        assert!(matches!(
            parse_vector_set(r#"{"vsId":1,"algorithm":"SHA2-256","revision":"1.0"}"#),
            Err(ModelError::MissingField { name: "testGroups", .. })
        ));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let dup_tg = r#"{"vsId":1,"algorithm":"A","revision":"1.0","testGroups":[
            {"tgId":1,"tests":[]},{"tgId":1,"tests":[]}]}"#;
        assert_eq!(parse_vector_set(dup_tg).unwrap_err(), ModelError::DuplicateTgId(1));
        let dup_tc = r#"{"vsId":1,"algorithm":"A","revision":"1.0","testGroups":[
            {"tgId":1,"tests":[{"tcId":5},{"tcId":5}]}]}"#;
        assert_eq!(parse_vector_set(dup_tc).unwrap_err(), ModelError::DuplicateTcId(5));
    }

    #[test]
    fn array_wrapper_accepted() {
        let wrapped = r#"[{"acvVersion":"1.0"},{"vsId":7,"algorithm":"SHA2-256","revision":"1.0","testGroups":[]}]"#;
        let vs = parse_vector_set(wrapped).unwrap();
        assert_eq!(vs.vs_id, 7);
        // output is a bare object
        assert!(serialize_vector_set(&vs).trim_start().starts_with('{'));
    }

    #[test]
    fn round_trip_identity() {
        let text = r#"{"vsId":3,"algorithm":"RSA","revision":"1.0","hashAlg":"SHA2-256",
            "testGroups":[{"tgId":1,"testType":"AFT","saltLen":20,
            "tests":[{"tcId":1,"message":"AB12","saltLen":32}],
            "subgroups":[{"tgId":2,"tests":[{"tcId":2,"flag":true}]}]}]}"#;
        let vs = parse_vector_set(text).unwrap();
        let out = serialize_vector_set(&vs);
        assert_eq!(parse_vector_set(&out).unwrap(), vs);
    }

    #[test]
    fn hex_bytes_serialize_uppercase_and_compare_equal() {
        let mut fields = BTreeMap::new();
        fields.insert("msg".to_string(), FieldValue::HexBytes(vec![0xab, 0xcd]));
        fields.insert("empty".to_string(), FieldValue::HexBytes(vec![]));
        let vs = VectorSet {
            vs_id: 1,
            algorithm: "SHA2-256".into(),
            mode: None,
            revision: "1.0".into(),
            shared_fields: BTreeMap::new(),
            groups: vec![TestGroup {
                tg_id: 1,
                test_type: Some("AFT".into()),
                shared_fields: BTreeMap::new(),
                tests: vec![TestCase { tc_id: 1, fields }],
                subgroups: vec![],
            }],
        };
        let out = serialize_vector_set(&vs);
        assert!(out.contains("\"ABCD\""));
        assert!(out.contains("\"empty\": \"\""), "empty bytes emit an empty string: {out}");
        assert_eq!(parse_vector_set(&out).unwrap(), vs);
    }

    #[test]
    fn response_set_round_trip_and_duplicates() {
        let rs = parse_response_set(r#"{"vsId":1,"testResults":[]}"#).unwrap();
        assert!(rs.results.is_empty());
        let text = r#"{"vsId":1,"testResults":[{"tcId":1,"md":"AA"},{"tcId":2,"md":"BB"}]}"#;
        let rs = parse_response_set(text).unwrap();
        assert_eq!(parse_response_set(&serialize_response_set(&rs)).unwrap(), rs);
        let dup = r#"{"vsId":1,"testResults":[{"tcId":3},{"tcId":3}]}"#;
        assert_eq!(parse_response_set(dup).unwrap_err(), ModelError::DuplicateTcId(3));
    }

    fn shared_field_fixture() -> VectorSet {
        parse_vector_set(
            r#"{"vsId":9,"algorithm":"RSA","revision":"1.0","sigType":"pss",
            "testGroups":[
              {"tgId":1,"testType":"AFT","hashAlg":"SHA2-256","saltLen":20,
               "tests":[{"tcId":1},{"tcId":2,"saltLen":32}],
               "subgroups":[
                 {"tgId":2,"hashAlg":"SHA2-384","tests":[{"tcId":3}]}
               ]}
            ]}"#,
        )
        .unwrap()
    }

    #[test]
    fn expand_pushes_shared_fields_down() {
        let vs = shared_field_fixture();
        let flat = expand_groups(&vs).unwrap();
        assert!(flat.groups.iter().all(|g| g.subgroups.is_empty()));
        assert!(flat.shared_fields.is_empty());
        assert!(flat.groups.iter().all(|g| g.shared_fields.is_empty()));
        let case = |id: u64| {
            flat.groups
                .iter()
                .flat_map(|g| &g.tests)
                .find(|c| c.tc_id == id)
                .unwrap()
                .clone()
        };
        assert_eq!(case(1).fields["hashAlg"], FieldValue::Text("SHA2-256".into()));
        assert_eq!(case(1).fields["saltLen"], FieldValue::Int(20));
        // case-level override wins
        assert_eq!(case(2).fields["saltLen"], FieldValue::Int(32));
        // innermost group wins
        assert_eq!(case(3).fields["hashAlg"], FieldValue::Text("SHA2-384".into()));
        // vector-set level field reaches every case
        assert_eq!(case(3).fields["sigType"], FieldValue::Text("pss".into()));
    }

    #[test]
    fn expand_is_idempotent() {
        let vs = shared_field_fixture();
        let once = expand_groups(&vs).unwrap();
        let twice = expand_groups(&once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn resolve_agrees_with_expand() {
        let vs = shared_field_fixture();
        let flat = expand_groups(&vs).unwrap();
        for group in &flat.groups {
            for case in &group.tests {
                for (name, value) in &case.fields {
                    let resolved = resolve_field(&vs, case.tc_id, name).unwrap();
                    assert_eq!(resolved, Some(value), "tc {} field {}", case.tc_id, name);
                }
            }
        }
        assert_eq!(resolve_field(&vs, 1, "nonexistent").unwrap(), None);
        assert_eq!(resolve_field(&vs, 999, "saltLen"), Err(ModelError::UnknownTcId(999)));
    }

    #[test]
    fn depth_limit_enforced() {
        let mut text = String::from(r#"{"vsId":1,"algorithm":"A","revision":"1.0","testGroups":["#);
        for i in 0..9 {
            text.push_str(&format!(r#"{{"tgId":{},"subgroups":["#, i + 1));
        }
        text.push_str(r#"{"tgId":100,"tests":[]}"#);
        for _ in 0..9 {
            text.push_str("]}");
        }
        text.push_str("]}");
        assert_eq!(parse_vector_set(&text).unwrap_err(), ModelError::DepthLimit);
    }
}
