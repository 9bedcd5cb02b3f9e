use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use shl::coeff::{AlgHom, Algebra, FinPresAlgebra};
use shl::homotopy::{circle_pair, interval_ctx, HomotopyCert, SubdividedHomotopy};
use shl::json as codec;
use shl::polyfun::{hat, random_family, tower, PolyFamily};
use shl::sset::cube_pair;
use shl::Ring;

fn shl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(17)
}

/// A map `free(1) → poly1^{(I^n, ∂I^n)}` at level `r`, as a document.
fn hom_doc(n: usize, r: usize) -> Value {
    let b = Algebra::poly1();
    let ctx = tower(&cube_pair(n)).ctx(r);
    let f = random_family(&b, &ctx, 2, true, &mut rng(), |g| b.random_elem(g, 3, 2));
    let hom = AlgHom::new(Algebra::free(1).presentation(), vec![f]).unwrap();
    serde_json::to_value(codec::encode_hom(&b, &ctx, &hom, Some(Algebra::free(1)))).unwrap()
}

fn words() -> Value {
    // a ⊗ a − a·a in J(free(1)); index 0 is the generator, 1 its square
    json!([[{"coeff": 1, "word": [0, 0]}, {"coeff": -1, "word": [1]}]])
}

#[test]
fn sset_commands() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.json", &json!({"kind": "cube", "n": 2}));
    let o = shl(&["sset", "check", &sq]);
    assert!(o.status.success());
    assert_eq!(stdout(&o)["counts"], json!([4, 5, 2]));
    let d1 = write(dir.path(), "d1.json", &json!({"kind": "simplex", "q": 1}));
    let o = shl(&["sset", "product", &d1, &d1]);
    assert_eq!(stdout(&o)["kind"], "explicit");
    let o = shl(&["sset", "subdivide", &d1, "--times", "2"]);
    assert_eq!(stdout(&o)["counts"], json!([5, 4]));
    let o = shl(&["sset", "lastvertex", &d1, "--from", "1", "--to", "0"]);
    assert_eq!(stdout(&o)["images"]["{0;1}"], "1");
    let o = shl(&["sset", "build", &sq]);
    let explicit = write(dir.path(), "explicit.json", &stdout(&o)["space"]);
    assert_eq!(stdout(&shl(&["sset", "check", &explicit]))["sub_counts"], json!([4, 4, 0]));
}

#[test]
fn verify_exit_codes_and_formats() {
    let o = shl(&["verify", "--filter", "gamma*", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("gamma_composition,") && rows[1].ends_with(",pass,"));

    let o = shl(&["verify", "--filter", "nothing*", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "name,anchor,status,witness\n");

    let o = shl(&["verify", "--fixture", "corrupted", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let report = stdout(&o);
    assert_eq!(report["checks"][0]["status"], "fail");
    assert!(report.pointer("/checks/0/witness").is_some());

    assert_eq!(shl(&["verify", "--filter", "["]).status.code(), Some(2));
    assert_eq!(shl(&["verify", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(shl(&["verify", "--max-r", "x"]).status.code(), Some(2));
}

#[test]
fn verify_csv_is_deterministic() {
    let run = || shl(&["verify", "--filter", "cert_*", "--format", "csv", "--seed", "5"]).stdout;
    assert_eq!(run(), run());
    let md = shl(&["verify", "--filter", "sd_counts", "--format", "markdown"]);
    assert!(String::from_utf8(md.stdout).unwrap().contains("| sd_counts |"));
}

#[test]
fn families_and_mu() {
    let dir = tempfile::tempdir().unwrap();
    let b = Algebra::poly1();
    let ip = tower(&cube_pair(1));
    let f = random_family(&b, &ip.ctx(0), 2, true, &mut rng(), |g| b.random_elem(g, 3, 2));
    let fj = serde_json::to_value(codec::encode_family(&b, &f)).unwrap();
    let fp = write(dir.path(), "f.json", &fj);
    assert_eq!(shl(&["fun", "kernel-check", &fp]).status.code(), Some(0));
    let o = shl(&["fun", "transition", &fp, "--to", "1"]);
    assert_eq!(stdout(&o)["level"], 1);

    // t_0 on I is not relative to the ends
    let z = Algebra::integers();
    let t0 = hat(&ip.ctx(0), 0).map_coeffs(&z, |k| z.scale(k, &z.one().unwrap()));
    let tp = write(dir.path(), "t0.json", &serde_json::to_value(codec::encode_family(&z, &t0)).unwrap());
    let o = shl(&["fun", "kernel-check", &tp]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o)["witness"], "0");
    assert_eq!(shl(&["fun", "mul", &tp, &tp]).status.code(), Some(0));

    let t01 = hat(&ip.ctx(0), 0).mul(&shl::Integers, &hat(&ip.ctx(0), 1)).unwrap();
    let g = t01.map_coeffs(&z, |k| z.scale(k, &z.one().unwrap()));
    let gp = write(dir.path(), "g.json", &serde_json::to_value(codec::encode_family(&z, &g)).unwrap());
    let o = shl(&["mu", "verify-lemma", &fp, &gp]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = shl(&["mu", "apply", &fp, &gp]);
    assert_eq!(stdout(&o)["space"], json!({"kind": "cube", "n": 2}));
    // the right factor must have integer coefficients
    assert_eq!(shl(&["mu", "apply", &fp, &fp]).status.code(), Some(2));

    assert_eq!(shl(&["mu", "cylinder", "--prism", "1,1"]).status.code(), Some(0));
    assert_eq!(shl(&["mu", "htilde", "--samples", "2"]).status.code(), Some(0));
    let o = shl(&["mu", "witness", "--max-deg", "2"]);
    assert_eq!(stdout(&o)["verified"], true);
}

#[test]
fn face_incompatible_family_is_rejected_with_its_label() {
    let dir = tempfile::tempdir().unwrap();
    let b = Algebra::poly1();
    let ctx = tower(&cube_pair(2)).ctx(0);
    let f = random_family(&b, &ctx, 2, true, &mut rng(), |g| b.random_elem(g, 3, 2));
    let mut doc = serde_json::to_value(codec::encode_family(&b, &f)).unwrap();
    let comps = doc["components"].as_object_mut().unwrap();
    let label = comps.keys().next().unwrap().clone();
    comps[&label]
        .as_array_mut()
        .unwrap()
        .push(json!({"exp": [0, 0], "coeff": codec::elem_to_json(&b.generator(1))}));
    let p = write(dir.path(), "bad.json", &doc);
    let o = shl(&["fun", "kernel-check", &p]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("not face compatible at simplex"), "{err}");

    let p = write(dir.path(), "unknown.json", &json!({"ring": "poly1", "space": {"kind": "cube", "n": 1}, "level": 0, "components": {}, "extra": 1}));
    let o = shl(&["fun", "kernel-check", &p]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certificates() {
    let dir = tempfile::tempdir().unwrap();
    let b = Algebra::poly1();
    let x = b.generator(1);
    let ctx = interval_ctx(0);
    let line = PolyFamily::constant(&b, &ctx, 0, x.clone())
        .add(&b, &hat(&ctx, 1).map_coeffs(&b, |k| b.scale(k, &b.sub(&b.mul(&x, &x), &x))))
        .unwrap();
    let link = SubdividedHomotopy::from_hom(&b, 0, AlgHom::new(FinPresAlgebra::free(&["a"]), vec![line]).unwrap()).unwrap();
    let cert = HomotopyCert::single(link);
    let doc = serde_json::to_value(codec::encode_cert(&b, &cert, None).unwrap()).unwrap();
    let cp = write(dir.path(), "c.json", &doc);
    assert_eq!(shl(&["htpy", "check", &cp]).status.code(), Some(0));
    let rev = stdout(&shl(&["htpy", "reverse", &cp]));
    let rp = write(dir.path(), "r.json", &rev);
    assert_eq!(shl(&["htpy", "check", &rp]).status.code(), Some(0));
    let glued = stdout(&shl(&["htpy", "concat", &cp, &rp]));
    assert_eq!(glued["links"][0]["level"], 1);
    let gp = write(dir.path(), "g.json", &glued);
    assert_eq!(shl(&["htpy", "check", &gp]).status.code(), Some(0));

    // a wrong endpoint fails the check
    let mut bad = doc.clone();
    bad["links"][0]["f1"] = json!([codec::elem_to_json(&x)]);
    let bp = write(dir.path(), "bad.json", &bad);
    let o = shl(&["htpy", "check", &bp]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o)["ok"], false);

    // the inverse witness of a map into B^{S_1}_0
    let s1 = tower(&circle_pair()).ctx(0);
    let f = random_family(&b, &s1, 2, true, &mut rng(), |g| b.random_elem(g, 3, 2));
    let hom = AlgHom::new(FinPresAlgebra::free(&["a"]), vec![f]).unwrap();
    let hp = write(dir.path(), "h.json", &serde_json::to_value(codec::encode_hom(&b, &s1, &hom, None)).unwrap());
    let o = shl(&["htpy", "invert-witness", &hp]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o)["report"], json!({"d0": true, "d1": true, "d2": true}));
}

#[test]
fn extensions() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t.json", &json!([{"coeff": 1, "word": [1, 2]}, {"coeff": -1, "word": [1]}]));
    // e_12 ⊗ e_21 − e_11 is not in J(matrix(2)), so its classifying value is undefined
    let o = shl(&["ext", "universal", "--algebra", "matrix(2)", &t]);
    assert_eq!(o.status.code(), Some(2));
    let key = |i: usize, j: usize| i * 2 + j;
    let jt = write(
        dir.path(),
        "j.json",
        &json!([{"coeff": 1, "word": [key(0, 1), key(1, 0)]}, {"coeff": -1, "word": [key(0, 0)]}]),
    );
    let o = shl(&["ext", "universal", "--algebra", "matrix(2)", &jt]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let xi = stdout(&o);
    assert_eq!(xi["strong"]["unique"], true);
    let o = shl(&["ext", "classify", "--algebra", "matrix(2)", "--extension", "trivial", &jt]);
    assert_eq!(stdout(&o)["xi"], json!([]));

    let samples = write(dir.path(), "s.json", &json!([[{"coeff": 1, "word": [key(0, 1), key(1, 0)]}, {"coeff": -1, "word": [key(0, 0)]}]]));
    let o = shl(&["ext", "split-homotopy", "--algebra", "matrix(2)", &samples]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let hp = write(dir.path(), "hom.json", &hom_doc(1, 0));
    let wp = write(dir.path(), "w.json", &words());
    let o = shl(&["ext", "lambda", &hp, &wp]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout(&o);
    assert_eq!(v["values"][0]["space"], json!({"kind": "cube", "n": 2}));
    assert_eq!(stdout(&shl(&["ext", "zeta", &hp, &wp])), v);

    let b = Algebra::poly1();
    let ctx = tower(&cube_pair(1)).ctx(0);
    let g = random_family(&b, &ctx, 2, true, &mut rng(), |r| b.random_elem(r, 3, 2));
    let gp = write(dir.path(), "g.json", &serde_json::to_value(codec::encode_family(&b, &g)).unwrap());
    let o = shl(&["ext", "path", &gp, "--power", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o)["projects_back"], true);
}

#[test]
fn map_spaces() {
    let dir = tempfile::tempdir().unwrap();
    let hp = write(dir.path(), "hom.json", &hom_doc(1, 0));
    let o = shl(&["space", "vertex", &hp]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let vertex = stdout(&o);
    assert_eq!(vertex["round_trip"], true);
    let vp = write(dir.path(), "v.json", &vertex["vertex"]);
    let o = shl(&["space", "face", &vp, "--index", "0", "--degeneracy"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let edge = stdout(&o);
    assert_eq!(edge["space"], json!({"kind": "cube", "n": 1, "q": 1}));
    let ep = write(dir.path(), "e.json", &edge);
    let back = stdout(&shl(&["space", "face", &ep, "--index", "1"]));
    assert_eq!(back["images"], vertex["vertex"]["images"]);

    let wp = write(dir.path(), "w.json", &words());
    let o = shl(&["space", "zeta", &vp, &wp]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o)["n"], 2);

    let diagram = json!({
        "source": {"builtin": "free(1)"},
        "ring": "poly1",
        "n": 1,
        "vertices": [
            {"id": "f", "level": 0, "images": vertex["vertex"]["images"]},
            {"id": "g", "level": 0, "images": vertex["vertex"]["images"]},
        ],
        "edges": [{"from": "f", "to": "g", "level": 0, "images": edge["images"]}],
    });
    let dp = write(dir.path(), "d.json", &diagram);
    let o = shl(&["space", "pi0", &dp]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o)["classes"], json!([["f", "g"]]));

    let o = shl(&["space", "compare-square", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o)["agreed"], 3);
}

#[test]
fn malformed_input_reports_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.json", &json!({"kind": "cube", "n": "two"}));
    let o = shl(&["sset", "check", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("schema violation"));
    assert_eq!(shl(&["sset", "check", "/nonexistent.json"]).status.code(), Some(2));
}
