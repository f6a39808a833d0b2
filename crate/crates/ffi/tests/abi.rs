use std::ffi::{c_char, CStr, CString};
use std::ptr;

use slopeflow::kinematics::write_series_path;
use slopeflow::scenarios::{example_network, fixture_node, generate_slope, SlopeScenario};
use slopeflow_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe {
        sf_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn network(n: usize, links: &[(usize, usize, f64)]) -> (SfStatus, *mut SfNetwork) {
    let lo: Vec<usize> = links.iter().map(|l| l.0).collect();
    let hi: Vec<usize> = links.iter().map(|l| l.1).collect();
    let cap: Vec<f64> = links.iter().map(|l| l.2).collect();
    let mut net = ptr::null_mut();
    let status = unsafe { sf_network_new(n, lo.as_ptr(), hi.as_ptr(), cap.as_ptr(), links.len(), &mut net) };
    (status, net)
}

fn fixture_handle() -> *mut SfNetwork {
    let core = example_network();
    let links: Vec<(usize, usize, f64)> =
        core.links().iter().zip(core.capacities()).map(|(l, &c)| (l.lo(), l.hi(), c)).collect();
    let (status, net) = network(core.node_count(), &links);
    assert_eq!(status, SfStatus::Ok);
    net
}

#[test]
fn fixture_bottleneck_through_the_abi() {
    let net = fixture_handle();
    unsafe {
        assert_eq!(sf_network_node_count(net), 9);
        let mut flow = 0.0;
        assert_eq!(sf_max_flow(net, fixture_node(1), fixture_node(8), &mut flow), SfStatus::Ok);
        assert_eq!(flow, 5.0);

        let mut tree = ptr::null_mut();
        assert_eq!(sf_tree_new(net, &mut tree), SfStatus::Ok);
        let mut value = 0.0;
        assert_eq!(sf_tree_min_cut_value(tree, fixture_node(1), fixture_node(8), &mut value), SfStatus::Ok);
        assert_eq!(value, 5.0);

        let mut cut = ptr::null_mut();
        assert_eq!(sf_bottleneck(tree, net, 0.3, 1.0, &mut cut), SfStatus::Ok);
        assert_eq!(sf_cut_capacity(cut), 5.0);
        assert_eq!(sf_cut_link_count(cut), 3);
        let size = sf_cut_side(cut, ptr::null_mut(), 0);
        let mut side = vec![0usize; size];
        assert_eq!(sf_cut_side(cut, side.as_mut_ptr(), side.len()), size);
        let mut other: Vec<usize> = (0..9).filter(|v| !side.contains(v)).collect();
        let mut top: Vec<usize> = [1, 2, 3].iter().map(|&l| fixture_node(l)).collect();
        top.sort_unstable();
        other.sort_unstable();
        assert!(side == top || other == top, "side {side:?}");
        assert!((sf_cut_ratio(cut) - 0.5).abs() < 1e-12);

        sf_cut_free(cut);
        sf_tree_free(tree);
        sf_network_free(net);
    }
}

#[test]
fn status_codes_and_messages() {
    let (status, net) = network(3, &[(0, 1, 1.0), (1, 1, 1.0)]);
    assert_eq!(status, SfStatus::InvalidArgument);
    assert!(net.is_null());
    assert!(last_error().contains("self-loop"));

    let (status, net) = network(4, &[(0, 1, 1.0), (2, 3, 1.0)]);
    assert_eq!(status, SfStatus::Ok);
    unsafe {
        let mut tree = ptr::null_mut();
        assert_eq!(sf_tree_new(net, &mut tree), SfStatus::Disconnected);
        assert!(tree.is_null());
        assert_eq!(sf_tree_new(ptr::null(), &mut tree), SfStatus::NullPointer);
        assert_eq!(sf_max_flow(net, 0, 1, ptr::null_mut()), SfStatus::NullPointer);
        let mut flow = 0.0;
        assert_eq!(sf_max_flow(net, 0, 1, &mut flow), SfStatus::Ok);
        assert_eq!(last_error(), "");
        sf_network_free(net);
    }

    // A path of three nodes has no cut with ratio 1.
    let (_, net) = network(3, &[(0, 1, 1.0), (1, 2, 2.0)]);
    unsafe {
        let mut tree = ptr::null_mut();
        assert_eq!(sf_tree_new(net, &mut tree), SfStatus::Ok);
        let mut cut = ptr::null_mut();
        assert_eq!(sf_bottleneck(tree, net, 0.9, 1.0, &mut cut), SfStatus::NoAdmissibleCut);
        assert_eq!(sf_bottleneck(tree, net, 0.9, 0.5, &mut cut), SfStatus::InvalidArgument);
        let mut value = 0.0;
        assert_eq!(sf_tree_min_cut_value(tree, 0, 7, &mut value), SfStatus::InvalidArgument);
        sf_tree_free(tree);
        sf_network_free(net);
    }
}

#[test]
fn last_error_truncates_and_reports_size() {
    let (status, _) = network(2, &[(0, 5, 1.0)]);
    assert_eq!(status, SfStatus::InvalidArgument);
    let mut small = [0 as c_char; 8];
    let needed = unsafe { sf_last_error(small.as_mut_ptr(), small.len()) };
    let full = last_error();
    assert_eq!(needed, full.len() + 1);
    let short = unsafe { CStr::from_ptr(small.as_ptr()) }.to_str().unwrap();
    assert_eq!(short, &full[..7]);
    assert_eq!(unsafe { sf_last_error(ptr::null_mut(), 0) }, needed);
}

#[test]
fn analyze_csv_end_to_end() {
    let scn = SlopeScenario {
        rows: 10,
        cols: 10,
        spacing: 5.0,
        boundary: vec![[0.0, 4.5], [9.0, 4.5]],
        states: 80,
        onset: 20,
        failure_time: 80,
        fukuzono_a: 0.01,
        noise_fraction: 0.05,
        seed: 5,
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    write_series_path(&path, &generate_slope(&scn).unwrap()).unwrap();
    let c_path = CString::new(path.to_str().unwrap()).unwrap();
    unsafe {
        let mut tl = ptr::null_mut();
        assert_eq!(sf_analyze_csv(c_path.as_ptr(), ptr::null(), &mut tl), SfStatus::Ok);
        assert_eq!(sf_timeline_len(tl), 79);
        let mut t = 0;
        assert!(sf_timeline_state(tl, 0, &mut t));
        assert_eq!(t, 1);
        assert!(!sf_timeline_state(tl, 79, &mut t));
        let mut t_star = 0;
        assert!(sf_timeline_regime_change(tl, &mut t_star));
        assert!((20..=50).contains(&t_star), "t* = {t_star}");
        let mut f = 0.0;
        assert!(sf_timeline_failure_resistance(tl, t_star - 1, &mut f));
        assert!(f > 0.0);
        let mut tf = 0.0;
        assert!(sf_timeline_failure_time(tl, &mut tf));
        assert!((tf - 80.0).abs() < 8.0, "t_F = {tf}");
        sf_timeline_free(tl);

        let cfg = CString::new(r#"{"capacity": {"epsilon": -1}}"#).unwrap();
        assert_eq!(sf_analyze_csv(c_path.as_ptr(), cfg.as_ptr(), &mut tl), SfStatus::Config);
        assert!(tl.is_null());
        let missing = CString::new(dir.path().join("none.csv").to_str().unwrap()).unwrap();
        assert_eq!(sf_analyze_csv(missing.as_ptr(), ptr::null(), &mut tl), SfStatus::Io);
        assert_eq!(sf_analyze_csv(ptr::null(), ptr::null(), &mut tl), SfStatus::NullPointer);
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(sf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    unsafe {
        sf_network_free(ptr::null_mut());
        sf_tree_free(ptr::null_mut());
        sf_cut_free(ptr::null_mut());
        sf_timeline_free(ptr::null_mut());
    }
}
