//! Command-line behaviour: spec and certificate files, exit codes, determinism.

use std::io::Write;
use std::path::PathBuf;

use goid::catalog::{build, INSTANCES};
use goid::cli::run;
use goid::equivalence::{Cocycle, CoeCertificate, GroupHom, PointMap};
use goid::dynamics::Point;
use goid::syntax::{export_certificate, export_spec, parse_certificate_str, parse_spec_str, Certificate};

fn repo(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn goid(args: &[&str]) -> (String, i32) {
    run(std::iter::once("goid").chain(args.iter().copied()))
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn digest(out: &str) -> String {
    out.lines().find_map(|l| l.strip_prefix("inputs_digest: ")).unwrap().to_string()
}

#[test]
fn shipped_specs_check_out() {
    for f in ["rot5.spec", "rot_int_3.spec", "onepoint_nat.spec", "rect_p1.spec"] {
        let spec = repo(&format!("specs/{f}"));
        let (out, code) = goid(&["check-etale", "--spec", &spec]);
        assert_eq!(code, 0, "{f}\n{out}");
    }
    let (out, code) = goid(&["enumerate", "--spec", &repo("specs/rot5.spec"), "--radius", "2"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn exported_specs_rebuild_the_catalog_instances() {
    for name in INSTANCES {
        let a = build(name).unwrap();
        let text = export_spec(&a).unwrap();
        let back = parse_spec_str(&text).unwrap().instance;
        assert_eq!(back, a, "{name}\n{text}");
        let (out, code) = goid(&["export-spec", "--name", name]);
        assert_eq!((out, code), (text, 0));
    }
}

#[test]
fn malformed_specs_are_located() {
    let f = temp_file("[group]\nfamily = int\n\n[space]\nkind = onepoint\ncarrier = posnat\n\n[action]\nrule = shift\n");
    let (out, code) = goid(&["check-etale", "--spec", f.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.contains("4:1") && out.contains("[semigroup]"), "{out}");

    let f = temp_file("[group]\nfamily = wobbly\n");
    let (out, code) = goid(&["check-etale", "--spec", f.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.starts_with("error: 2:"), "{out}");
}

#[test]
fn non_injective_tables_are_rejected_at_load() {
    let text = "[group]\nfamily = cyclic(3)\n\n[semigroup]\nid = full\ngenerators = 1\n\n[space]\nkind = finite\nsize = 3\n\n\
                [action]\nrule = table\nmap = 1 : 0 0 1\nmap = 2 : 0 1 2\n";
    let f = temp_file(text);
    let (out, code) = goid(&["check-etale", "--spec", f.path().to_str().unwrap()]);
    assert_eq!(code, 3, "{out}");
    assert!(out.to_lowercase().contains("injective") || out.to_lowercase().contains("axiom"), "{out}");
}

#[test]
fn bad_arguments_exit_with_usage_errors() {
    assert_eq!(goid(&["check-etale"]).1, 3);
    assert_eq!(goid(&["battery", "--name", "no_such_instance"]).1, 3);
    assert_eq!(goid(&["frobnicate"]).1, 3);
    assert_eq!(goid(&["check-etale", "--spec", "/nonexistent/x.spec"]).1, 3);
}

#[test]
fn reports_are_deterministic_and_track_their_inputs() {
    let text = std::fs::read_to_string(repo("specs/rot5.spec")).unwrap();
    let f = temp_file(&text);
    let path = f.path().to_str().unwrap().to_string();
    let one = goid(&["calg-check", "--spec", &path, "--radius", "2"]);
    let two = goid(&["calg-check", "--spec", &path, "--radius", "2"]);
    assert_eq!(one, two);
    assert_eq!(one.1, 0, "{}", one.0);

    let g = temp_file(&format!("{text}\n# edited\n"));
    let edited = goid(&["calg-check", "--spec", g.path().to_str().unwrap(), "--radius", "2"]);
    assert_ne!(digest(&one.0), digest(&edited.0));
    let wider = goid(&["calg-check", "--spec", &path, "--radius", "3"]);
    assert_ne!(digest(&one.0), digest(&wider.0));
    let seeded = goid(&["calg-check", "--spec", &path, "--radius", "2", "--seed", "7"]);
    assert_ne!(digest(&one.0), digest(&seeded.0));
}

#[test]
fn additive_and_multiplicative_shifts_are_not_orbit_equivalent_by_the_identity() {
    let (out, code) = goid(&["verify-oe", "--name", "add_n", "--name-b", "mult_n"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("witness:"), "{out}");
}

fn doubling() -> Certificate {
    Certificate::Coe(CoeCertificate {
        phi: PointMap::table((0..5).map(|i| (Point::Finite(i), Point::Finite(2 * i % 5)))),
        a: Cocycle::Hom(GroupHom::Scale(2)),
        b: Cocycle::Hom(GroupHom::Scale(3)),
    })
}

#[test]
fn certificate_files_round_trip_and_verify() {
    let a = build("rot_finite(5)").unwrap();
    let cert = doubling();
    let text = export_certificate(&cert).unwrap();
    assert_eq!(parse_certificate_str(&text, &a, &a).unwrap(), cert);

    let shipped = std::fs::read_to_string(repo("certs/rot5_doubling.cert")).unwrap();
    assert_eq!(parse_certificate_str(&shipped, &a, &a).unwrap(), cert);

    let spec = repo("specs/rot5.spec");
    let f = temp_file(&text);
    let cert_path = f.path().to_str().unwrap();
    for cmd in ["verify-coe", "coe-bridge", "verify-oe"] {
        let (out, code) = goid(&[cmd, "--spec", &spec, "--cert", cert_path]);
        assert_eq!(code, 0, "{cmd}\n{out}");
    }

    // a wrong cocycle on the way back
    let bad = temp_file(&text.replace("hom scale 3", "hom scale 2"));
    let (out, code) = goid(&["verify-coe", "--spec", &spec, "--cert", bad.path().to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");

    // two points sent to the same place
    let bad = temp_file(&text.replace("1 -> 2", "1 -> 3"));
    let (out, code) = goid(&["verify-coe", "--spec", &spec, "--cert", bad.path().to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("phi is a bijection on the window"), "{out}");

    let (out, code) = goid(&["verify-conjugacy", "--spec", &spec, "--cert", &repo("certs/rot5_doubling_conj.cert")]);
    assert_eq!(code, 0, "{out}");
    let (_, code) = goid(&["verify-conjugacy", "--spec", &spec, "--cert", cert_path]);
    assert_eq!(code, 3);
}

#[test]
fn json_reports_parse() {
    let (out, code) = goid(&["--json", "battery", "--name", "rot_finite(5)", "--radius", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["command"], "battery");
    assert!(v["records"].as_array().unwrap().len() > 5);
    for r in v["records"].as_array().unwrap() {
        assert!(r["claim"].is_string() && r["anchor"].is_string() && r["checked"].is_u64());
    }
}

#[test]
fn orbit_and_compactification_commands() {
    let (out, code) = goid(&["orbit", "--name", "rot_finite(5)", "--point", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("size: 5"), "{out}");
    let (out, code) = goid(&["compactify-check", "--name", "onepoint(nat)", "--radius", "3"]);
    assert_eq!(code, 0, "{out}");
    let (out, code) = goid(&["freeness", "--name", "rot_int(3)"]);
    assert_eq!(code, 1, "{out}");
}
