#![no_main]

use libfuzzer_sys::fuzz_target;
use linwenger::metrics::MetricsReport;
use linwenger::spectrum::SpectrumReport;
use linwenger::verify::CriterionResult;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<SpectrumReport>(data) {
        let again: SpectrumReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(again, r);
    }
    if let Ok(r) = serde_json::from_slice::<MetricsReport>(data) {
        let again: MetricsReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(again, r);
    }
    if let Ok(r) = serde_json::from_slice::<Vec<CriterionResult>>(data) {
        let again: Vec<CriterionResult> = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(again, r);
    }
});
