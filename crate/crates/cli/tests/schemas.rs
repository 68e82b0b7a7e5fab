use vorticity_cli::schemas::{DEGREE_REPORT_SCHEMA, FIELD_CSV_SCHEMA};
use vorticity_core::contour_degree;
use vorticity_core::io::{DegreeRecord, FIELD_COLUMNS};
use vorticity_core::su2::synthetic_field;

#[test]
fn field_schema_matches_writer_columns() {
    let schema: serde_json::Value = serde_json::from_str(FIELD_CSV_SCHEMA).unwrap();
    let names: Vec<&str> = schema["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, FIELD_COLUMNS);
}

#[test]
fn degree_schema_matches_record() {
    let schema: serde_json::Value = serde_json::from_str(DEGREE_REPORT_SCHEMA).unwrap();
    let report = contour_degree(&synthetic_field(1, 1.0, 16).unwrap()).unwrap();
    let value = serde_json::to_value(DegreeRecord::new("ring", &report)).unwrap();
    let mut keys: Vec<&String> = value.as_object().unwrap().keys().collect();
    let mut props: Vec<&String> = schema["properties"].as_object().unwrap().keys().collect();
    keys.sort();
    props.sort();
    assert_eq!(keys, props);
    let required: Vec<&str> = schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(required.len(), props.len());
}
