use std::ffi::{CStr, CString};
use std::ptr;

use sphere_bpp_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sbpp_last_error_message()) }.to_str().unwrap().to_owned()
}

fn preset(name: &str) -> *mut SbppConstellation {
    let name = CString::new(name).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { sbpp_constellation_from_preset(name.as_ptr(), &mut c) }, SbppStatus::Ok);
    assert!(!c.is_null());
    c
}

fn distribution(c: *const SbppConstellation, observer: u32) -> *mut SbppDistribution {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { sbpp_distribution_new(c, observer, &mut d) }, SbppStatus::Ok);
    d
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(sbpp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn analytic_queries() {
    let c = preset("oneweb");
    assert_eq!(unsafe { sbpp_constellation_num_shells(c) }, 1);
    let d = distribution(c, 0);
    let mut v = 0.0;
    unsafe {
        assert_eq!(sbpp_distribution_cdf(d, 1400.0, &mut v), SbppStatus::Ok);
        assert!((v - 0.916_937_782_674_351).abs() < 1e-12);
        assert_eq!(sbpp_distribution_shell_ccdf(d, 1, 1400.0, &mut v), SbppStatus::Ok);
        assert!((v - (1.0 - 0.916_937_782_674_351)).abs() < 1e-12);
        assert_eq!(sbpp_distribution_visibility(d, &mut v), SbppStatus::Ok);
        assert!(v > 0.999_999 && v <= 1.0);
        assert_eq!(sbpp_distribution_quantile(d, 0.0, &mut v), SbppStatus::Ok);
        assert_eq!(v, 1200.0);
        let mut mean = 0.0;
        assert_eq!(sbpp_distribution_conditional_mean(d, &mut mean), SbppStatus::Ok);
        assert!(mean > 1200.0 && mean < 1400.0, "{mean}");
        assert_eq!(last_error(), "");

        sbpp_distribution_free(d);
        sbpp_constellation_free(c);
    }
}

#[test]
fn json_constellation_and_nn_observer() {
    let json = CString::new(r#"{"shells": [{"altitude_km": 550, "num_satellites": 20}]}"#).unwrap();
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(sbpp_constellation_from_json(json.as_ptr(), &mut c), SbppStatus::Ok);
        let d = distribution(c, 1);
        let mut v = 0.0;
        assert_eq!(sbpp_distribution_cdf(d, 0.0, &mut v), SbppStatus::Ok);
        assert_eq!(v, 0.0);
        sbpp_distribution_free(d);
        sbpp_constellation_free(c);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut c = ptr::null_mut();
    let bogus = CString::new("bogus").unwrap();
    let bad_json = CString::new("{\"shells\": []}").unwrap();
    let not_json = CString::new("not json").unwrap();
    unsafe {
        assert_eq!(sbpp_constellation_from_preset(bogus.as_ptr(), &mut c), SbppStatus::UnknownPreset);
        assert!(last_error().contains("oneweb"));
        assert!(c.is_null());
        assert_eq!(sbpp_constellation_from_json(bad_json.as_ptr(), &mut c), SbppStatus::InvalidConfig);
        assert_eq!(sbpp_constellation_from_json(not_json.as_ptr(), &mut c), SbppStatus::InvalidConfig);
        assert!(!last_error().is_empty());

        let c = preset("fig4");
        let mut d = ptr::null_mut();
        assert_eq!(sbpp_distribution_new(c, 9, &mut d), SbppStatus::ShellIndexOutOfRange);
        let d = distribution(c, 0);
        let mut v = 0.0;
        assert_eq!(sbpp_distribution_shell_ccdf(d, 0, 10.0, &mut v), SbppStatus::ShellIndexOutOfRange);
        assert_eq!(sbpp_distribution_shell_ccdf(d, 5, 10.0, &mut v), SbppStatus::ShellIndexOutOfRange);
        assert_eq!(sbpp_distribution_cdf(d, -1.0, &mut v), SbppStatus::InvalidArgument);
        assert_eq!(sbpp_distribution_quantile(d, 1.5, &mut v), SbppStatus::InvalidArgument);
        sbpp_distribution_free(d);

        let mut e = ptr::null_mut();
        assert_eq!(sbpp_run_experiment(c, 0, 0, 1, SbppSampler::Colatitude, &mut e), SbppStatus::InvalidArgument);
        sbpp_constellation_free(c);

        let one = CString::new(r#"{"shells": [{"altitude_km": 550, "num_satellites": 1}]}"#).unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(sbpp_constellation_from_json(one.as_ptr(), &mut c), SbppStatus::Ok);
        let d = distribution(c, 0);
        assert_eq!(sbpp_distribution_quantile(d, 0.5, &mut v), SbppStatus::BeyondVisibility);
        sbpp_distribution_free(d);
        sbpp_constellation_free(c);

        let none = CString::new(r#"{"shells": [{"altitude_km": 550, "num_satellites": 0}]}"#).unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(sbpp_constellation_from_json(none.as_ptr(), &mut c), SbppStatus::Ok);
        let d = distribution(c, 0);
        assert_eq!(sbpp_distribution_conditional_mean(d, &mut v), SbppStatus::ZeroVisibility);
        let mut d2 = ptr::null_mut();
        assert_eq!(sbpp_distribution_new(c, 1, &mut d2), SbppStatus::InvalidConfig);
        sbpp_distribution_free(d);
        sbpp_constellation_free(c);
    }
}

#[test]
fn null_handles_are_reported() {
    let mut v = 0.0;
    let mut c = ptr::null_mut();
    let mut d = ptr::null_mut();
    let mut e = ptr::null_mut();
    let (mut total, mut inf) = (0u64, 0u64);
    let mut pass = false;
    unsafe {
        assert_eq!(sbpp_constellation_from_json(ptr::null(), &mut c), SbppStatus::NullPointer);
        assert_eq!(sbpp_constellation_from_preset(ptr::null(), &mut c), SbppStatus::NullPointer);
        assert!(last_error().contains("NULL"));
        let name = CString::new("oneweb").unwrap();
        assert_eq!(sbpp_constellation_from_preset(name.as_ptr(), ptr::null_mut()), SbppStatus::NullPointer);
        assert_eq!(sbpp_constellation_num_shells(ptr::null()), 0);
        assert_eq!(sbpp_distribution_new(ptr::null(), 0, &mut d), SbppStatus::NullPointer);
        assert_eq!(sbpp_distribution_cdf(ptr::null(), 1.0, &mut v), SbppStatus::NullPointer);
        assert_eq!(sbpp_distribution_shell_ccdf(ptr::null(), 1, 1.0, &mut v), SbppStatus::NullPointer);
        assert_eq!(sbpp_distribution_visibility(ptr::null(), &mut v), SbppStatus::NullPointer);
        assert_eq!(sbpp_distribution_quantile(ptr::null(), 0.1, &mut v), SbppStatus::NullPointer);
        assert_eq!(sbpp_distribution_conditional_mean(ptr::null(), &mut v), SbppStatus::NullPointer);
        assert_eq!(
            sbpp_run_experiment(ptr::null(), 0, 10, 1, SbppSampler::Colatitude, &mut e),
            SbppStatus::NullPointer
        );
        assert_eq!(sbpp_empirical_eval(ptr::null(), 1.0, &mut v), SbppStatus::NullPointer);
        assert_eq!(sbpp_empirical_counts(ptr::null(), &mut total, &mut inf), SbppStatus::NullPointer);
        assert_eq!(sbpp_ks_compare(ptr::null(), ptr::null(), 0.01, &mut v, &mut pass), SbppStatus::NullPointer);

        let c = preset("oneweb");
        let d = distribution(c, 0);
        assert_eq!(sbpp_distribution_cdf(d, 1.0, ptr::null_mut()), SbppStatus::NullPointer);
        sbpp_distribution_free(d);
        sbpp_constellation_free(c);

        sbpp_constellation_free(ptr::null_mut());
        sbpp_distribution_free(ptr::null_mut());
        sbpp_empirical_free(ptr::null_mut());
    }
}

#[test]
fn simulation_round_trip() {
    let c = preset("fig3-circle");
    let d = distribution(c, 0);
    let mut e = ptr::null_mut();
    let (mut total, mut inf) = (0u64, 0u64);
    let (mut stat, mut pass) = (1.0, false);
    let mut v = 0.0;
    unsafe {
        assert_eq!(sbpp_run_experiment(c, 0, 20_000, 5, SbppSampler::Colatitude, &mut e), SbppStatus::Ok);
        assert_eq!(sbpp_empirical_counts(e, &mut total, &mut inf), SbppStatus::Ok);
        assert_eq!(total, 20_000);
        assert!(inf < 100);
        assert_eq!(sbpp_empirical_eval(e, 1e6, &mut v), SbppStatus::Ok);
        assert_eq!(v, (total - inf) as f64 / total as f64);
        assert_eq!(sbpp_ks_compare(e, d, 0.03, &mut stat, &mut pass), SbppStatus::Ok);
        assert!(pass && stat < 0.03, "{stat}");
        sbpp_empirical_free(e);

        let mut area = ptr::null_mut();
        assert_eq!(sbpp_run_experiment(c, 0, 20_000, 5, SbppSampler::Area, &mut area), SbppStatus::Ok);
        assert_eq!(sbpp_ks_compare(area, d, 0.03, &mut stat, &mut pass), SbppStatus::Ok);
        assert!(!pass);
        sbpp_empirical_free(area);

        sbpp_distribution_free(d);
        sbpp_constellation_free(c);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/sphere_bpp.h");
    for name in [
        "sbpp_version",
        "sbpp_last_error_message",
        "sbpp_constellation_from_json",
        "sbpp_constellation_from_preset",
        "sbpp_constellation_num_shells",
        "sbpp_constellation_free",
        "sbpp_distribution_new",
        "sbpp_distribution_free",
        "sbpp_distribution_cdf",
        "sbpp_distribution_shell_ccdf",
        "sbpp_distribution_visibility",
        "sbpp_distribution_quantile",
        "sbpp_distribution_conditional_mean",
        "sbpp_run_experiment",
        "sbpp_empirical_eval",
        "sbpp_empirical_counts",
        "sbpp_empirical_free",
        "sbpp_ks_compare",
        "SBPP_STATUS_NULL_POINTER",
        "typedef struct SbppDistribution SbppDistribution",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
