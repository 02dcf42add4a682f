use std::path::Path;

#[test]
fn header_declares_the_whole_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/lct.h")).unwrap();
    for needle in [
        "typedef struct LctIdeal LctIdeal;",
        "typedef struct LctCertificate LctCertificate;",
        "LCT_STATUS_OK = 0",
        "LCT_STATUS_INVALID_INPUT = 2",
        "LCT_STATUS_UPPER_BOUND = 3",
        "LCT_STATUS_BUDGET_EXCEEDED = 4",
        "lct_ideal_from_json(const char *json, struct LctIdeal **out)",
        "lct_ideal_free(",
        "lct_ideal_compute(",
        "lct_certificate_is_exact(",
        "lct_certificate_value(",
        "lct_certificate_to_json(",
        "lct_certificate_free(",
        "lct_curve_json(",
        "lct_ideal_nu(",
        "lct_fpt_lower_check(",
        "lct_last_error(void)",
        "lct_string_free(",
        "lct_version(void)",
    ] {
        assert!(header.contains(needle), "header lacks {needle:?}");
    }
}
