use std::ffi::{CStr, CString};
use std::ptr;
use xwigner_ffi::*;

fn last_error() -> String {
    let p = xw_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn field_round_trip_through_handles() {
    unsafe {
        let cfg = xw_config_new();
        let mut f = ptr::null_mut();
        assert_eq!(xw_field_new(cfg, XwKind::Free, 33, 17, true, &mut f), XwStatus::Ok);
        let (mut nx, mut nk) = (0, 0);
        assert_eq!(xw_field_dims(f, &mut nx, &mut nk), XwStatus::Ok);
        assert_eq!((nx, nk), (33, 17));

        let n = (nx * nk) as usize;
        let (mut re, mut im) = (vec![0.0; n], vec![0.0; n]);
        assert_eq!(xw_field_values(f, re.as_mut_ptr(), im.as_mut_ptr(), n), XwStatus::Ok);
        let (mut xs, mut ks) = (vec![0.0; 33], vec![0.0; 17]);
        assert_eq!(xw_field_axes(f, xs.as_mut_ptr(), ks.as_mut_ptr()), XwStatus::Ok);
        // centre sample of the γ=0 field is the largest in magnitude
        let mag = |i: usize| re[i].hypot(im[i]);
        let c = 16 * 17 + 8;
        assert!((0..n).all(|i| mag(i) <= mag(c) * (1.0 + 1e-12)));
        assert!(xs[16].abs() < 1e-18 && ks[8].abs() < 1e-6);

        assert_eq!(xw_field_values(f, re.as_mut_ptr(), im.as_mut_ptr(), n - 1), XwStatus::Config);
        xw_field_free(f);
        xw_config_free(cfg);
    }
}

#[test]
fn gouy_toggle_is_a_global_phase() {
    unsafe {
        let cfg = xw_config_new();
        let key = CString::new("gamma").unwrap();
        assert_eq!(xw_config_set(cfg, key.as_ptr(), -1.0), XwStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(xw_field_new(cfg, XwKind::Screen, 21, 21, true, &mut a), XwStatus::Ok);
        assert_eq!(xw_field_new(cfg, XwKind::Screen, 21, 21, false, &mut b), XwStatus::Ok);
        let n = 441;
        let mut v = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        let [ar, ai, br, bi] = &mut v;
        xw_field_values(a, ar.as_mut_ptr(), ai.as_mut_ptr(), n);
        xw_field_values(b, br.as_mut_ptr(), bi.as_mut_ptr(), n);
        let peak = (0..n).map(|i| ar[i].hypot(ai[i])).fold(0.0, f64::max);
        for i in 0..n {
            assert!((ar[i].hypot(ai[i]) - br[i].hypot(bi[i])).abs() < 1e-12 * peak);
        }
        let mut dmu = 0.0;
        assert_eq!(xw_gouy_delta_slit(cfg, &mut dmu), XwStatus::Ok);
        assert!(dmu != 0.0);
        xw_field_free(a);
        xw_field_free(b);
        xw_config_free(cfg);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let cfg = xw_config_new();
        let key = CString::new("sigma0").unwrap();
        assert_eq!(xw_config_set(cfg, key.as_ptr(), -1.0), XwStatus::Config);
        assert!(last_error().contains("sigma0"));
        let bogus = CString::new("colour").unwrap();
        assert_eq!(xw_config_set(cfg, bogus.as_ptr(), 1.0), XwStatus::Config);

        // rejected value leaves the previous one in place
        let mut d = 0.0;
        assert_eq!(xw_gouy_delta_free(cfg, 0.05, &mut d), XwStatus::Ok);
        assert!((d - 0.766_138_679_374_722_8).abs() < 1e-12);

        assert_eq!(xw_gouy_delta_free(ptr::null(), 0.05, &mut d), XwStatus::NullPointer);
        assert_eq!(xw_gouy_delta_free(cfg, -1.0, &mut d), XwStatus::Config);

        let mut f = ptr::null_mut();
        assert_eq!(xw_field_new(cfg, XwKind::Free, 1, 5, true, &mut f), XwStatus::Config);
        assert!(f.is_null());

        let tau = CString::new("tau").unwrap();
        assert_eq!(xw_config_set(cfg, tau.as_ptr(), 0.0), XwStatus::Ok);
        assert_eq!(xw_gouy_delta_slit(cfg, &mut d), XwStatus::Config);

        let mut g = ptr::null_mut();
        assert_eq!(xw_field_new(cfg, XwKind::Free, 16, 16, true, &mut g), XwStatus::Ok);
        let path = CString::new("/nonexistent-dir/x.bin").unwrap();
        assert_eq!(xw_field_save(g, path.as_ptr(), true), XwStatus::Io);
        xw_field_free(g);
        xw_config_free(cfg);
        xw_config_free(ptr::null_mut());
    }
}

#[test]
fn save_writes_readable_binary() {
    let dir = std::env::temp_dir().join(format!("xwigner-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("slits.bin");
    unsafe {
        let cfg = xw_config_new();
        let mut f = ptr::null_mut();
        assert_eq!(xw_field_new(cfg, XwKind::Slits, 16, 16, true, &mut f), XwStatus::Ok);
        let p = CString::new(path.to_str().unwrap()).unwrap();
        assert_eq!(xw_field_save(f, p.as_ptr(), true), XwStatus::Ok);
        xw_field_free(f);
        xw_config_free(cfg);
    }
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..5], b"XWIG1");
    assert_eq!(bytes.len(), 5 + 8 + 8 * 32 + 16 * 256 + 1);
    std::fs::remove_dir_all(dir).unwrap();
}
