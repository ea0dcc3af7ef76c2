//! The two-feature toy model used across the test suites.

use recourse_core::model::load_model_str;
use recourse_core::{EbmModel, FeatureValue, Instance};

pub const T1_JSON: &str = include_str!("../../../fixtures/t1.json");

pub fn t1() -> EbmModel {
    load_model_str(T1_JSON).expect("fixture parses")
}

/// `{A: 8, B: red}`, scored −1.
pub fn t1_instance(model: &EbmModel) -> Instance {
    Instance::new(model, vec![FeatureValue::Number(8.0), FeatureValue::Level(0)]).expect("fixture instance")
}
