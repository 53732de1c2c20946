//! Acceptance suite: one PASS/FAIL line per criterion, then a nonzero exit
//! if any criterion failed. Tolerances and time budgets are pinned below.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use cayley_ldpc::alist;
use cayley_ldpc::cayley_code::CayleyCode;
use cayley_ldpc::cyclic::{cyclic_shift, interleave_phi, CyclicCode};
use cayley_ldpc::field::BinaryPoly;
use cayley_ldpc::gf2;
use cayley_ldpc::graph::{Adjacency, CayleyGraph, GraphError};
use cayley_ldpc::group::{mat_add, mat_mul, mat_scalar};
use cayley_ldpc::lsv::{build_generators, classify, split_quaternion, LsvParams, Variant};
use cayley_ldpc::pipeline::{certify_generating_set, construct_graph, GraphOptions, PipelineError};
use cayley_ldpc::spectrum::SpectrumMode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Slack on every eigenvalue comparison against the Ramanujan bound.
const EIGEN_TOL: f64 = 1e-6;
/// Allowed disagreement between the dense and iterative solvers.
const MODE_AGREEMENT: f64 = 1e-5;
const QUATERNION_SEED: u64 = 20_240_601;
const QUATERNION_DRAWS: usize = 50;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);

struct Cli {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Cli {
    let out = Command::new(env!("CARGO_BIN_EXE_cayley-ldpc"))
        .args(args)
        .output()
        .expect("run cli");
    Cli {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn cli_ok(args: &[&str]) -> Result<Cli, String> {
    let r = cli(args);
    if r.code == 0 {
        Ok(r)
    } else {
        Err(format!(
            "`{}` exited {}: {}",
            args.join(" "),
            r.code,
            r.stderr.trim()
        ))
    }
}

fn json(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("bad JSON: {e}"))
}

fn read_json(path: &Path) -> Result<Value, String> {
    json(&fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn num(v: &Value, ptr: &str) -> Result<u64, String> {
    v.pointer(ptr)
        .and_then(Value::as_u64)
        .ok_or(format!("missing integer {ptr}"))
}

fn real(v: &Value, ptr: &str) -> Result<f64, String> {
    v.pointer(ptr)
        .and_then(Value::as_f64)
        .ok_or(format!("missing number {ptr}"))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Criterion 1: doubled BCH(11, r) with r from a = 8, exact rational checks.
fn inner_code_instance(dir: &Path) -> Outcome {
    let bch_path = dir.join("bch_m11.code");
    let b_path = dir.join("b_4094.code");
    let bch = json(&cli_ok(&["bch", "--m", "11", "--a", "8", "--out", s(&bch_path)])?.stdout)?;
    let r = num(&bch, "/r")?;
    let bch_k = num(&bch, "/params/k")?;
    ensure(num(&bch, "/params/n")? == 2047, "BCH length")?;
    ensure(bch_k >= 1283, format!("BCH dimension {bch_k} < 1283"))?;
    let doubled = json(&cli_ok(&["double", "--input", s(&bch_path), "--out", s(&b_path)])?.stdout)?;
    let (n, k) = (num(&doubled, "/doubled/n")?, num(&doubled, "/doubled/k")?);
    let code = CyclicCode::read_text(fs::read(&b_path).map_err(|e| e.to_string())?.as_slice())
        .map_err(|e| e.to_string())?;
    ensure(
        (code.len(), code.dim()) == (n as usize, k as usize),
        "file disagrees with report",
    )?;
    ensure(
        n == 4094 && k == 2 * bch_k,
        format!("doubled code [{n}, {k}]"),
    )?;
    // rate >= 5/8 = 1/2 + 1/a
    ensure(8 * k >= 5 * n, format!("rate {k}/{n} < 5/8"))?;
    // designed delta (r+1)/(q+1) > 2 sqrt(q)/(q+1)  <=>  (r+1)^2 > 4q
    let d = r + 1;
    ensure(d == 140, format!("designed distance {d}"))?;
    ensure(
        d * d > 4 * 4093,
        "designed distance below the Ramanujan threshold",
    )?;
    Ok(format!(
        "[{n}, {k}], rate {k}/{n} >= 5/8, designed delta {d}/4094 = {:.5} > {:.5}",
        d as f64 / 4094.0,
        2.0 * 4093f64.sqrt() / 4094.0
    ))
}

/// Criterion 2: BCH(4, 2) and its doubling.
fn bch_oracle(dir: &Path) -> Outcome {
    let c_path = dir.join("bch_m4.code");
    let b_path = dir.join("b_30.code");
    let c = json(&cli_ok(&["bch", "--m", "4", "--r", "2", "--out", s(&c_path)])?.stdout)?;
    ensure(
        (
            num(&c, "/params/n")?,
            num(&c, "/params/k")?,
            num(&c, "/params/d_exact")?,
        ) == (15, 11, 3),
        "BCH(4,2) is not [15,11,3]",
    )?;
    let b = json(&cli_ok(&["double", "--input", s(&c_path), "--out", s(&b_path)])?.stdout)?;
    ensure(
        (
            num(&b, "/doubled/n")?,
            num(&b, "/doubled/k")?,
            num(&b, "/doubled/d_exact")?,
        ) == (30, 22, 3),
        "doubled code is not [30,22,3]",
    )?;
    let read = |p: &Path| {
        CyclicCode::read_text(fs::read(p).unwrap().as_slice()).map_err(|e| e.to_string())
    };
    let (small, big) = (read(&c_path)?, read(&b_path)?);
    let basis = big.basis();
    for row in basis.rows() {
        let word: Vec<bool> = (0..30).map(|i| gf2::get_bit(row, i)).collect();
        ensure(
            big.contains(&cyclic_shift(&word)),
            "shift of a spanning word left the code",
        )?;
    }
    // a weight-3 word of the [15,11] code, interleaved with zero
    let sb = small.basis();
    let light = (1u32..1 << 11)
        .map(|mask| {
            (0..15)
                .map(|j| {
                    (0..11)
                        .filter(|i| mask >> i & 1 == 1)
                        .fold(false, |acc, i| acc ^ sb.get(i, j))
                })
                .collect::<Vec<bool>>()
        })
        .find(|w| w.iter().filter(|&&b| b).count() == 3)
        .ok_or("no weight-3 word in BCH(4,2)")?;
    let word = interleave_phi(&light, &[false; 15]).map_err(|e| e.to_string())?;
    ensure(
        word.iter().filter(|&&b| b).count() == 3 && big.contains(&word),
        "no weight-3 word in the doubled code",
    )?;
    Ok(
        "[15,11,3] by 2^11 enumeration; doubled [30,22,3], shift-closed, weight-3 word present"
            .into(),
    )
}

/// Criterion 3: Ramanujan certification for both variants at q = 19.
fn ramanujan(dir: &Path) -> Outcome {
    let bound = 2.0 * 19f64.sqrt() / 20.0;
    let run = |variant: &str, mode: &str| -> Result<Value, String> {
        let path = dir.join(format!("graph_{variant}_{mode}.json"));
        let r = cli(&[
            "graph",
            "--q",
            "19",
            "--variant",
            variant,
            "--mode",
            mode,
            "--report",
            s(&path),
        ]);
        ensure(
            r.code == 0,
            format!(
                "graph {variant} {mode} exited {}: {}",
                r.code,
                r.stderr.trim()
            ),
        )?;
        read_json(&path)
    };
    let dense = run("psl", "dense")?;
    let iter = run("psl", "iterative")?;
    let pgl = run("pgl", "iterative")?;
    for (name, rep, vertices, bipartite) in [
        ("PSL dense", &dense, 3420, false),
        ("PSL iterative", &iter, 3420, false),
        ("PGL", &pgl, 6840, true),
    ] {
        ensure(
            num(rep, "/graph/vertices")? == vertices,
            format!("{name}: vertex count"),
        )?;
        ensure(num(rep, "/graph/degree")? == 20, format!("{name}: degree"))?;
        ensure(
            rep.pointer("/graph/bipartite") == Some(&Value::Bool(bipartite)),
            format!("{name}: bipartite flag"),
        )?;
        ensure(
            rep.pointer("/spectrum/trivial_ok") == Some(&Value::Bool(true)),
            format!("{name}: trivial eigenvalues"),
        )?;
        let worst = real(rep, "/spectrum/max_nontrivial_abs")?;
        ensure(
            worst <= bound + EIGEN_TOL,
            format!("{name}: |lambda| = {worst} > {bound}"),
        )?;
    }
    let dl2 = (real(&dense, "/spectrum/lambda2")? - real(&iter, "/spectrum/lambda2")?).abs();
    let dmin = (real(&dense, "/spectrum/nontrivial_min")?
        - real(&iter, "/spectrum/nontrivial_min")?)
    .abs();
    ensure(
        dl2 <= MODE_AGREEMENT && dmin <= MODE_AGREEMENT,
        format!("dense/iterative disagree by {dl2:e}, {dmin:e}"),
    )?;
    Ok(format!(
        "PSL max|lambda| {:.6}, PGL max|lambda| {:.6} <= {bound:.6}; dense vs iterative {:.1e}",
        real(&dense, "/spectrum/max_nontrivial_abs")?,
        real(&pgl, "/spectrum/max_nontrivial_abs")?,
        dl2.max(dmin)
    ))
}

/// Criterion 4: one edge orbit under G ⋊ T covers all 34200 edges.
fn edge_transitivity(dir: &Path) -> Outcome {
    let path = dir.join("graph_edges_orbit.json");
    cli_ok(&[
        "graph",
        "--q",
        "19",
        "--mode",
        "iterative",
        "--report",
        s(&path),
    ])?;
    let rep = read_json(&path)?;
    let orbit = num(&rep, "/graph/edge_transitivity/orbit_size")?;
    let edges = num(&rep, "/graph/edges")?;
    ensure(
        orbit == 34200 && edges == 34200,
        format!("orbit {orbit} of {edges} edges"),
    )?;
    ensure(
        rep.pointer("/graph/labels_match_group") == Some(&Value::Bool(true)),
        "label actions disagree with matrices",
    )?;
    Ok(format!("orbit of edge 0 has size {orbit} = |E|"))
}

/// Criterion 5: rate bound, invariance and single orbit at q = 19.
fn structural_checks(dir: &Path, inst: &Path) -> Outcome {
    let inner_path = dir.join("inner_20_12.code");
    fs::write(&inner_path, "20 12\nfe1\n").map_err(|e| e.to_string())?;
    let inner = CyclicCode::read_text(fs::read(&inner_path).unwrap().as_slice())
        .map_err(|e| e.to_string())?;
    ensure(2 * inner.dim() > inner.len(), "inner rate not above 1/2")?;
    cli_ok(&[
        "build",
        "--q",
        "19",
        "--inner",
        s(&inner_path),
        "--out-dir",
        s(inst),
        "--mode",
        "iterative",
        "--trials",
        "200",
    ])?;
    let rep = read_json(&inst.join("report.json"))?;
    let rank = num(&rep, "/bounds/rank")?;
    // 1 - rank/34200 >= 2 * 12/20 - 1 = 1/5
    ensure(
        5 * (34200 - rank) >= 34200,
        format!("rate (34200 - {rank})/34200 < 1/5"),
    )?;
    ensure(
        rep.pointer("/bounds/rate_bound_holds") == Some(&Value::Bool(true)),
        "report disagrees on the rate bound",
    )?;
    let inv = rep
        .pointer("/checks/details/invariance")
        .ok_or("no invariance details")?;
    ensure(
        num(inv, "/rows_checked")? == 200 && inv["pass"] == Value::Bool(true),
        "invariance failed",
    )?;
    ensure(
        inv["actions"].as_array().map(Vec::len) == Some(2),
        "invariance needs both generators",
    )?;
    let orbit = rep
        .pointer("/checks/details/single_orbit")
        .ok_or("no single-orbit details")?;
    let (orank, hrank) = (num(orbit, "/orbit_rank")?, num(orbit, "/h_rank")?);
    ensure(
        orank == hrank && hrank == rank,
        format!("orbit rank {orank}, rank(H) {hrank}"),
    )?;
    ensure(num(orbit, "/v0_weight")? <= 20, "v0 heavier than q + 1")?;
    ensure(
        rep.pointer("/checks/pass") == Some(&Value::Bool(true)),
        "some build check failed",
    )?;
    Ok(format!(
        "rank(H) = {rank}, rate {}/34200 = {:.4} >= 1/5; 200 rows x 2 generators invariant; orbit rank {orank} = rank(H)",
        34200 - rank,
        (34200 - rank) as f64 / 34200.0
    ))
}

fn clmul(a: u64, b: u64) -> u64 {
    (0..64)
        .filter(|i| b >> i & 1 == 1)
        .fold(0, |acc, i| acc ^ (a << i))
}

fn brute_force_equal(adj: &Adjacency, g: u64) -> Result<usize, String> {
    let n = adj.degree();
    let deg = 63 - g.leading_zeros() as usize;
    let mut table = vec![false; 1 << n];
    for m in 0..1u64 << (n - deg) {
        table[clmul(m, g) as usize] = true;
    }
    let inner =
        CyclicCode::from_generator(n, BinaryPoly::from_bits((0..64).map(|i| g >> i & 1 == 1)))
            .map_err(|e| e.to_string())?;
    let code = CayleyCode::build(adj.clone(), inner).map_err(|e| e.to_string())?;
    let stars: Vec<Vec<u32>> = (0..adj.num_vertices())
        .map(|v| adj.star(v).to_vec())
        .collect();
    let filtered: BTreeSet<u64> = (0..1u64 << adj.num_edges())
        .filter(|&x| {
            stars.iter().all(|star| {
                table[star
                    .iter()
                    .enumerate()
                    .fold(0usize, |a, (i, &e)| a | ((x >> e & 1) as usize) << i)]
            })
        })
        .collect();
    let basis = code.parity_check().nullspace();
    let dim = basis.num_rows();
    ensure(dim <= 20, format!("dimension {dim} > 20"))?;
    let rows: Vec<u64> = basis.rows().map(|r| r[0]).collect();
    let span: BTreeSet<u64> = (0..1u64 << dim)
        .map(|mask| {
            rows.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0, |a, (_, r)| a ^ r)
        })
        .collect();
    ensure(
        span == filtered,
        format!("null space and local-view filter differ (generator {g:#b})"),
    )?;
    Ok(dim)
}

/// Criterion 6: exhaustive equivalence on toy Cayley codes.
fn brute_force() -> Outcome {
    let k7 = CayleyGraph::generate(0u32, &[1, 3, 2, 6, 4, 5], |a, b| (a + b) % 7, 100)
        .map_err(|e| e.to_string())?
        .adjacency()
        .clone();
    let dihedral = |a: &(u32, u32), b: &(u32, u32)| {
        (
            (if a.1 == 0 { a.0 + b.0 } else { a.0 + 5 - b.0 }) % 5,
            a.1 ^ b.1,
        )
    };
    let reflections: Vec<(u32, u32)> = (0..5).map(|k| (k, 1)).collect();
    let d5 = CayleyGraph::generate((0, 0), &reflections, dihedral, 100)
        .map_err(|e| e.to_string())?
        .adjacency()
        .clone();
    let mut dims = Vec::new();
    for g in [0b111, 0b1001] {
        dims.push(brute_force_equal(&k7, g)?);
    }
    for g in [0b11, 0b11111] {
        dims.push(brute_force_equal(&d5, g)?);
    }
    Ok(format!(
        "K7 (2^21 vectors) and D5 (2^25 vectors), code dimensions {dims:?}"
    ))
}

fn is_square_mod(a: u64, q: u64) -> bool {
    (1..q).any(|x| x * x % q == a % q)
}

/// Criterion 7: 50 seeded quaternion draws.
fn quaternion_draws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(QUATERNION_SEED);
    let primes = [5u64, 7, 11, 13, 17, 19, 23];
    let mut graph_time = Duration::ZERO;
    let mut graphs = 0;
    let start = Instant::now();
    for draw in 0..QUATERNION_DRAWS {
        let q = primes[rng.gen_range(0..primes.len())];
        let y = rng.gen_range(1..q - 1);
        let nonsquares: Vec<u64> = (1..q).filter(|&d| !is_square_mod(d, q)).collect();
        let delta = nonsquares[rng.gen_range(0..nonsquares.len())];
        let tag = format!("draw {draw} (q={q}, y={y}, delta={delta})");
        let params = LsvParams::new(q, 1, Some(delta), |f| Ok(f.from_int(y as i64)))
            .map_err(|e| format!("{tag}: {e}"))?;
        let f = &params.ambient;
        let c = params.c();
        let sp =
            split_quaternion(f, &params.delta_ambient(), &c).map_err(|e| format!("{tag}: {e}"))?;
        ensure(
            mat_mul(f, &sp.m_alpha, &sp.m_alpha) == mat_scalar(f, &params.delta_ambient()),
            format!("{tag}: alpha^2"),
        )?;
        ensure(
            mat_mul(f, &sp.m_z, &sp.m_z) == mat_scalar(f, &c),
            format!("{tag}: z^2"),
        )?;
        let anti = mat_add(
            f,
            &mat_mul(f, &sp.m_z, &sp.m_alpha),
            &mat_mul(f, &sp.m_alpha, &sp.m_z),
        );
        ensure(
            anti == mat_scalar(f, &f.zero()),
            format!("{tag}: anticommutation"),
        )?;
        let gens = build_generators(&params, &sp).map_err(|e| format!("{tag}: {e}"))?;
        let group = &gens.group;
        ensure(gens.len() == q as usize + 1, format!("{tag}: |S|"))?;
        ensure(
            !gens.elements.contains(&group.identity()),
            format!("{tag}: identity in S"),
        )?;
        ensure(
            gens.elements
                .iter()
                .all(|s| gens.elements.contains(&group.inv(s))),
            format!("{tag}: S not symmetric"),
        )?;
        let ratio = y * (1..q).find(|x| x * (y + 1) % q == 1).unwrap() % q;
        let want = if is_square_mod(ratio, q) {
            Variant::Psl
        } else {
            Variant::Pgl
        };
        ensure(
            classify(&params, &gens).ok() == Some(want),
            format!("{tag}: classification"),
        )?;
        ensure(
            gens.elements
                .iter()
                .all(|s| group.in_psl(s) == (want == Variant::Psl)),
            format!("{tag}: determinant class"),
        )?;
        if q <= 13 {
            let t = Instant::now();
            let mut options = GraphOptions::new(q, 1, want);
            options.delta = Some(delta);
            options.ybar = Some(y as u128);
            options.mode = Some(SpectrumMode::Iterative);
            let run = construct_graph(&options).map_err(|e| format!("{tag}: {e}"))?;
            ensure(
                run.structure.bipartite == (want == Variant::Pgl),
                format!("{tag}: bipartiteness"),
            )?;
            graph_time += t.elapsed();
            graphs += 1;
        }
    }
    let algebra = start.elapsed() - graph_time;
    ensure(
        algebra <= Duration::from_secs(120),
        format!("draws took {algebra:?} excluding graphs"),
    )?;
    Ok(format!(
        "{QUATERNION_DRAWS} draws, relations exact, classification consistent; {graphs} graphs built, bipartite iff PGL"
    ))
}

fn copy_dir(from: &Path, to: &Path) -> Result<(), String> {
    fs::create_dir_all(to).map_err(|e| e.to_string())?;
    for entry in fs::read_dir(from).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        fs::copy(entry.path(), to.join(entry.file_name())).map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// Criterion 8: tampered alist and damaged generating sets are reported.
fn negative_controls(dir: &Path, inst: &Path) -> Outcome {
    let clean = cli(&["verify", s(inst)]);
    ensure(
        clean.code == 0,
        format!("clean instance: verify exited {}", clean.code),
    )?;

    let flipped = dir.join("flipped");
    copy_dir(inst, &flipped)?;
    let alist_path = flipped.join("code.alist");
    let mut h = alist::read_alist(fs::read(&alist_path).map_err(|e| e.to_string())?.as_slice())
        .map_err(|e| e.to_string())?;
    // a bit inside the star of row 0's vertex, off the row's support
    let edges = fs::read_to_string(inst.join("graph.edges")).map_err(|e| e.to_string())?;
    let star0: Vec<usize> = edges
        .lines()
        .skip(1)
        .enumerate()
        .filter(|(_, l)| l.split_whitespace().take(2).any(|t| t == "0"))
        .map(|(e, _)| e)
        .collect();
    let col = *star0
        .iter()
        .find(|&&e| !gf2::get_bit(h.row(0), e))
        .ok_or("row 0 fills its star")?;
    gf2::flip_bit(h.row_mut(0), col);
    let mut out = Vec::new();
    alist::write_alist(&h, &mut out).map_err(|e| e.to_string())?;
    fs::write(&alist_path, out).map_err(|e| e.to_string())?;
    let bad = cli(&["verify", s(&flipped)]);
    ensure(
        bad.code == 1,
        format!("bit-flipped alist: verify exited {}", bad.code),
    )?;
    ensure(
        bad.stdout.contains("FAIL invariance"),
        "bit flip not caught by the invariance check",
    )?;

    let missing = dir.join("missing");
    copy_dir(inst, &missing)?;
    fs::remove_file(missing.join("code.alist")).map_err(|e| e.to_string())?;
    let gone = cli(&["verify", s(&missing)]);
    ensure(
        gone.code == 2,
        format!("missing file: verify exited {}", gone.code),
    )?;

    let mut options = GraphOptions::new(19, 1, Variant::Psl);
    options.mode = Some(SpectrumMode::Iterative);
    let run = construct_graph(&options).map_err(|e| e.to_string())?;
    let mut dropped = run.gens.elements.clone();
    dropped.remove(0);
    let single = match certify_generating_set(19, 1, Variant::Psl, &run.gens, &dropped, 0) {
        Err(PipelineError::Graph(GraphError::NotSymmetric(i))) => {
            format!("rejected (generator {i} has no inverse)")
        }
        Ok(checks) if !checks.pass => format!("failed {:?}", checks.failed()),
        Ok(_) => return Err("set with a generator removed passed".into()),
        Err(e) => return Err(e.to_string()),
    };
    let inv = run.gens.inverse[0];
    let pair: Vec<_> = (0..run.gens.len())
        .filter(|&i| i != 0 && i != inv)
        .map(|i| run.gens.elements[i].clone())
        .collect();
    let checks = certify_generating_set(19, 1, Variant::Psl, &run.gens, &pair, 0)
        .map_err(|e| e.to_string())?;
    ensure(
        !checks.pass && !checks.results["regular"],
        "set with an inverse pair removed passed",
    )?;
    Ok(format!(
        "clean verify 0, bit flip 1 (FAIL {:?}), missing file 2; one generator removed: {single}; inverse pair removed: failed {:?}",
        bad.stdout.lines().filter(|l| l.starts_with("FAIL")).map(|l| &l[5..]).collect::<Vec<_>>(),
        checks.failed()
    ))
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let dir = tmp.path().to_path_buf();
    let inst: PathBuf = dir.join("q19_instance");
    let criteria: Vec<Criterion> = vec![
        (
            "inner code q=4094 from BCH(11, a=8)",
            60,
            Box::new({
                let d = dir.clone();
                move || inner_code_instance(&d)
            }),
        ),
        (
            "BCH(4,2) oracle and doubling",
            5,
            Box::new({
                let d = dir.clone();
                move || bch_oracle(&d)
            }),
        ),
        (
            "Ramanujan certification q=19 PSL/PGL",
            600,
            Box::new({
                let d = dir.clone();
                move || ramanujan(&d)
            }),
        ),
        (
            "edge transitivity q=19 PSL",
            60,
            Box::new({
                let d = dir.clone();
                move || edge_transitivity(&d)
            }),
        ),
        (
            "structural code checks q=19 PSL",
            1800,
            Box::new({
                let (d, i) = (dir.clone(), inst.clone());
                move || structural_checks(&d, &i)
            }),
        ),
        (
            "brute-force code equivalence on toys",
            120,
            Box::new(brute_force),
        ),
        (
            "quaternion splitting invariants",
            600,
            Box::new(quaternion_draws),
        ),
        (
            "negative controls",
            600,
            Box::new({
                let (d, i) = (dir.clone(), inst.clone());
                move || negative_controls(&d, &i)
            }),
        ),
    ];
    let mut failed = 0;
    for (i, (title, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(msg) if secs > *budget as f64 => Err(format!("{msg}; over the {budget} s budget")),
            other => other,
        };
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("criterion {} {tag}: {title}: {msg} [{secs:.1} s]", i + 1);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
