//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{make_table, oracle_spearman, random_table};
use era::agent::{extract_agent_metrics, run_agent, AgentConfig};
use era::criteria::{compute_fi, rank_pairs, RankingTable};
use era::level::{TileClass, TileGrid};
use era::metrics::{candidate_names, extract_table};
use era::report::round_sig;
use era::stats::{spearman_rho, MetricTable};
use era::synth::{generate_ensemble, SynthParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pair_enumeration() -> Outcome {
    for n in 3..=18 {
        let r = rank_pairs(&random_table(n as u64, 30, n), 20).map_err(|e| e.to_string())?;
        check(
            r.pairs.len() == n * (n - 1) / 2,
            format!("{n} metrics gave {} pairs", r.pairs.len()),
        )?;
    }
    let full = rank_pairs(&random_table(0, 30, 18), 20)
        .unwrap()
        .pairs
        .len();
    let three = rank_pairs(&random_table(0, 30, 3), 20).unwrap().pairs.len();
    check(
        full == 153 && three == 3,
        format!("18 -> {full}, 3 -> {three}"),
    )?;
    Ok("n(n-1)/2 for n = 3..18; 18 -> 153, 3 -> 3".into())
}

fn spearman_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let n = rng.random_range(2..=200);
        let tied = case % 2 == 1;
        let mut draw = || -> Vec<f64> {
            (0..n)
                .map(|_| {
                    if tied {
                        rng.random_range(0..6) as f64
                    } else {
                        rng.random_range(-1e3..1e3)
                    }
                })
                .collect()
        };
        let (x, y) = (draw(), draw());
        let got = spearman_rho(&x, &y).map_err(|e| e.to_string())?.rho;
        worst = worst.max((got - oracle_spearman(&x, &y)).abs());
    }
    check(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    let worked = spearman_rho(&[1.0, 2.0, 3.0, 4.0, 5.0], &[5.0, 6.0, 7.0, 8.0, 7.0])
        .unwrap()
        .rho;
    let expect = 8.0 / 95f64.sqrt();
    check(
        (worked - expect).abs() <= 1e-12,
        format!("worked example {worked} vs {expect}"),
    )?;
    Ok(format!(
        "1000 vectors, max deviation {worst:.1e}; worked example {worked:.4}"
    ))
}

/// Extracted metrics of a small synthetic ensemble: real count and ratio
/// columns, with ties.
fn small_extracted_table() -> MetricTable {
    let sets: Vec<SynthParams> = [(0.0, 0.02, 0), (0.06, 0.08, 1), (0.12, 0.04, 2)]
        .into_iter()
        .enumerate()
        .map(|(i, (gap, enemy, step))| SynthParams {
            seed: 100 + i as u64,
            level_count: 150,
            gap_prob: gap,
            enemy_prob: enemy,
            height_walk_step: step,
            generator_label: format!("g{i}"),
            ..SynthParams::default()
        })
        .collect();
    extract_table(&generate_ensemble(&sets).unwrap(), &AgentConfig::default())
}

fn compare_rank_based(a: &RankingTable, b: &RankingTable) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for p in &a.pairs {
        let q = b.find(&p.m1, &p.m2).ok_or("pair vanished")?;
        worst = worst.max((p.mc - q.mc).abs()).max((p.amc - q.amc).abs());
        check(
            p.mc_rank == q.mc_rank && p.amc_rank == q.amc_rank,
            format!("rank of {} changed", p.label()),
        )?;
    }
    check(worst <= 1e-12, format!("score moved by {worst:e}"))?;
    Ok(worst)
}

fn rank_invariance(t: &MetricTable) -> Outcome {
    let base = rank_pairs(t, 20).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut scaled = Vec::new();
    for name in t.candidate_names() {
        let col = t.column(name).unwrap();
        let mut cubed = t.clone();
        cubed.map_column(name, |v| v * v * v).unwrap();
        worst = worst.max(compare_rank_based(&base, &rank_pairs(&cubed, 20).unwrap())?);

        // exp overflows past ~709; such columns are divided by their largest
        // magnitude first, which keeps the map strictly increasing.
        let big = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let s = if big > 700.0 {
            scaled.push(name.to_string());
            big
        } else {
            1.0
        };
        let mut exped = t.clone();
        exped.map_column(name, |v| (v / s).exp()).unwrap();
        worst = worst.max(compare_rank_based(&base, &rank_pairs(&exped, 20).unwrap())?);
    }
    let note = if scaled.is_empty() {
        String::new()
    } else {
        format!("; exp(x/max|x|) used for {}", scaled.join(", "))
    };
    Ok(format!(
        "18 columns x {{x^3, exp}}: max change {worst:.1e}, no rank moved{note}"
    ))
}

fn fi_affine(t: &MetricTable) -> Outcome {
    let names: Vec<String> = t.candidate_names().iter().map(|s| s.to_string()).collect();
    let mut checked = 0;
    for name in &names {
        let mut moved = t.clone();
        moved.map_column(name, |v| 3.0 * v + 7.0).unwrap();
        for other in names.iter().filter(|o| *o != name) {
            let a = compute_fi(t, name, other, 20).map_err(|e| e.to_string())?;
            let b = compute_fi(&moved, name, other, 20).map_err(|e| e.to_string())?;
            check(a == b, format!("FI({name}, {other}) {a} -> {b}"))?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} (column, pair) cases identical at resolution 20"
    ))
}

fn fi_oracle() -> Outcome {
    let fi = |a: &[f64], b: &[f64], f: &[f64]| {
        let t = make_table(
            vec![
                ("A".into(), a.to_vec()),
                ("B".into(), b.to_vec()),
                ("C".into(), vec![0.0; a.len()]),
            ],
            Some(f.to_vec()),
        );
        compute_fi(&t, "A", "B", 2).unwrap()
    };
    let corners = fi(
        &[0.0, 1.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 1.0],
        &[1.0, 1.0, 0.0, 0.0],
    );
    let one_cell = {
        let t = make_table(
            vec![
                ("A".into(), vec![2.0; 4]),
                ("B".into(), vec![5.0; 4]),
                ("C".into(), vec![1.0, 2.0, 3.0, 4.0]),
            ],
            Some(vec![1.0; 4]),
        );
        compute_fi(&t, "A", "B", 2).unwrap()
    };
    let full = fi(
        &[0.0, 1.0, 0.0, 1.0, 0.5],
        &[0.0, 0.0, 1.0, 1.0, 0.2],
        &[1.0; 5],
    );
    check(corners == 0.5, format!("corners gave {corners}"))?;
    check(one_cell == 0.25, format!("one cell gave {one_cell}"))?;
    check(full == 1.0, format!("full grid gave {full}"))?;
    Ok("0.5, 0.25 and 1.0 exactly".into())
}

fn independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 10_000;
    let a: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    let b: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    let t = make_table(
        vec![
            ("A".into(), a.clone()),
            ("B".into(), b),
            ("Acopy".into(), a),
        ],
        Some(vec![1.0; n]),
    );
    let r = rank_pairs(&t, 20).map_err(|e| e.to_string())?;
    let ab = r.find("A", "B").unwrap();
    let dup = r.find("A", "Acopy").unwrap();
    let worst_mc = r.pairs.iter().map(|p| p.mc_rank).fold(0.0, f64::max);
    check(ab.mc < 0.05, format!("MC(A,B) = {}", ab.mc))?;
    check(ab.fi.unwrap() > 0.9, format!("FI(A,B) = {:?}", ab.fi))?;
    check(dup.mc == 1.0, format!("MC(A,A') = {}", dup.mc))?;
    check(
        dup.mc_rank == worst_mc && r.pairs.iter().filter(|p| p.mc_rank == worst_mc).count() == 1,
        "duplicate pair is not uniquely worst by MC",
    )?;
    Ok(format!(
        "MC(A,B) = {:.4}, FI(A,B) = {:.4}, MC(A,A') = 1 with MC rank {worst_mc}",
        ab.mc,
        ab.fi.unwrap()
    ))
}

fn amc_duplicate() -> Outcome {
    let mut worst_margin = f64::INFINITY;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 500;
        let mut col = || (0..n).map(|_| rng.random::<f64>()).collect::<Vec<f64>>();
        let (a, b, d) = (col(), col(), col());
        let t = make_table(
            vec![
                ("A".into(), a.clone()),
                ("B".into(), b),
                ("C".into(), a),
                ("D".into(), d),
            ],
            Some(vec![1.0; n]),
        );
        let r = rank_pairs(&t, 20).map_err(|e| e.to_string())?;
        let ab = r.find("A", "B").unwrap().amc;
        let bd = r.find("B", "D").unwrap().amc;
        check(
            ab >= bd,
            format!("seed {seed}: AMC(A,B) {ab} < AMC(B,D) {bd}"),
        )?;
        worst_margin = worst_margin.min(ab - bd);
    }
    Ok(format!(
        "20 seeds, AMC(A,B) - AMC(B,D) >= {worst_margin:.3}"
    ))
}

fn floor(width: usize, height: usize) -> Vec<TileClass> {
    let mut cells = vec![TileClass::Empty; width * height];
    for x in 0..width {
        cells[(height - 1) * width + x] = TileClass::Solid;
    }
    cells
}

fn agent_sanity() -> Outcome {
    let cfg = AgentConfig::default();
    let (w, h) = (40, 16);
    let flat = TileGrid::from_classes(w, floor(w, h), "flat", "t");
    let m = extract_agent_metrics(&run_agent(&flat, &cfg), &flat, &cfg);
    check(
        m.playability == 1.0 && m.jump_count == 0.0 && m.on_ground_ratio == 1.0,
        format!("flat floor: {m:?}"),
    )?;
    let tall = cfg.max_jump_height as usize + 1;
    for k in [5, 12, 20, 33] {
        let mut cells = floor(w, h);
        for y in h - 1 - tall..h - 1 {
            cells[y * w + k] = TileClass::Solid;
        }
        let g = TileGrid::from_classes(w, cells, "wall", "t");
        let p = extract_agent_metrics(&run_agent(&g, &cfg), &g, &cfg).playability;
        let expect = k as f64 / (w - 1) as f64;
        check(
            (p - expect).abs() <= 1.0 / (w - 1) as f64 + 1e-12,
            format!("wall at {k}: playability {p}, expected {expect}"),
        )?;
    }
    Ok(format!(
        "flat floor 1/0/1; {tall}-tall wall at k gives k/(w-1) within one tile"
    ))
}

fn run_era(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_era"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    check(
        out.status.success(),
        format!("era {args:?}: {}", String::from_utf8_lossy(&out.stderr)),
    )
}

fn snapshot(root: &Path) -> Vec<(String, Vec<u8>)> {
    fn walk(base: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        let mut entries: Vec<_> = fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                walk(base, &p, out);
            } else {
                let rel = p.strip_prefix(base).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, &mut out);
    out
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let params = tmp.path().join("params");
    fs::create_dir_all(&params).unwrap();
    let mut files = Vec::new();
    for (label, gap, enemy) in [
        ("calm", 0.0, 0.03),
        ("rough", 0.1, 0.05),
        ("busy", 0.03, 0.15),
    ] {
        let path = params.join(format!("{label}.txt"));
        fs::write(&path, format!("generator_label = {label}\nlevel_count = 60\ngap_prob = {gap}\nenemy_prob = {enemy}\n")).unwrap();
        files.push(path.to_string_lossy().into_owned());
    }
    let mut runs = Vec::new();
    for (name, threads) in [("a", "1"), ("b", "1"), ("c", "8")] {
        let dir = tmp.path().join(name);
        fs::create_dir_all(&dir).unwrap();
        let mut synth = vec!["--threads", threads, "synth", "-o", "levels"];
        synth.extend(files.iter().map(String::as_str));
        run_era(&dir, &synth)?;
        run_era(
            &dir,
            &[
                "--threads",
                threads,
                "extract",
                "levels",
                "-o",
                "out/metrics.csv",
            ],
        )?;
        run_era(
            &dir,
            &[
                "--threads",
                threads,
                "report",
                "out/metrics.csv",
                "-o",
                "out/report",
            ],
        )?;
        runs.push(snapshot(&dir.join("out")));
    }
    let files_per_run = runs[0].len();
    check(
        files_per_run >= 11,
        format!("only {files_per_run} output files"),
    )?;
    check(
        runs[0].iter().any(|(n, _)| n.ends_with(".svg"))
            && runs[0].iter().any(|(n, _)| n.ends_with(".csv")),
        "missing CSV or SVG output",
    )?;
    for (i, other) in runs.iter().enumerate().skip(1) {
        if *other != runs[0] {
            let diff = runs[0]
                .iter()
                .zip(other)
                .find(|(a, b)| a != b)
                .map(|(a, _)| a.0.clone())
                .unwrap_or_else(|| "file list".into());
            return Err(format!("run {i} differs in {diff}"));
        }
    }
    Ok(format!(
        "{files_per_run} files byte-identical across two runs and --threads 1 vs 8"
    ))
}

fn full_pipeline(dir: &Path) -> Outcome {
    let start = Instant::now();
    run_era(dir, &["synth", "--benchmark", "-o", "levels"])?;
    let synth = start.elapsed();
    run_era(dir, &["extract", "levels", "-o", "metrics.csv"])?;
    let extract = start.elapsed() - synth;
    run_era(
        dir,
        &["report", "metrics.csv", "-o", "report", "--top", "5"],
    )?;
    let total = start.elapsed();
    let rows = fs::read_to_string(dir.join("metrics.csv"))
        .map_err(|e| e.to_string())?
        .lines()
        .count()
        - 1;
    check(rows == 9014, format!("{rows} levels extracted"))?;
    check(
        total < Duration::from_secs(15 * 60),
        format!("took {total:?}"),
    )?;
    Ok(format!(
        "9014 levels in {:.1}s (synth {:.1}s, extract {:.1}s, rank + report {:.1}s)",
        total.as_secs_f64(),
        synth.as_secs_f64(),
        extract.as_secs_f64(),
        (total - synth - extract).as_secs_f64()
    ))
}

fn report_shape(dir: &Path) -> Outcome {
    let summary = fs::read_to_string(dir.join("report/summary.md")).map_err(|e| e.to_string())?;
    let blocks: Vec<&str> = summary.split("\n## ").skip(1).collect();
    let titles: Vec<&str> = blocks.iter().map(|b| b.lines().next().unwrap()).collect();
    check(
        titles
            == [
                "Top 5 by FI",
                "Top 5 by MC",
                "Top 5 by AMC",
                "Top 5 by Average Rank",
            ],
        format!("blocks {titles:?}"),
    )?;
    for b in &blocks {
        let rows: Vec<&str> = b
            .lines()
            .filter(|l| l.starts_with("| ") && !l.starts_with("| Metric"))
            .collect();
        check(rows.len() == 5, format!("block has {} rows", rows.len()))?;
        for row in rows {
            for cell in row
                .split('|')
                .map(str::trim)
                .skip(2)
                .filter(|c| !c.is_empty())
            {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| format!("non-numeric cell {cell:?}"))?;
                check(
                    round_sig(v, 3) == v,
                    format!("{cell} has more than 3 significant figures"),
                )?;
            }
        }
    }
    let comp = fs::read_to_string(dir.join("report/composition.md")).map_err(|e| e.to_string())?;
    let row = |name: &str| -> Result<Vec<usize>, String> {
        let line = comp
            .lines()
            .find(|l| l.starts_with(&format!("| {name} |")))
            .ok_or(format!("no {name} row"))?;
        Ok(line
            .split('|')
            .map(str::trim)
            .filter_map(|c| c.parse().ok())
            .collect())
    };
    let (ss, sa, aa) = (
        row("Structural-Structural")?,
        row("Structural-Agent")?,
        row("Agent-Agent")?,
    );
    let all = (
        *ss.last().unwrap(),
        *sa.last().unwrap(),
        *aa.last().unwrap(),
    );
    check(all == (36, 81, 36), format!("all-pairs split {all:?}"))?;
    let per_block_total: usize = [&ss, &sa, &aa]
        .iter()
        .map(|r| r[..4].iter().sum::<usize>())
        .sum();
    check(
        per_block_total == 20,
        format!("blocks hold {per_block_total} pairs"),
    )?;
    check(candidate_names().count() == 18, "catalog size")?;
    Ok("4 blocks x 5 rows at 3 s.f.; 3 pair categories; 81 of 153 structural-agent".into())
}

fn main() {
    let extracted = small_extracted_table();
    let big = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<Criterion> = vec![
        ("pair enumeration", Box::new(pair_enumeration)),
        ("spearman oracle", Box::new(spearman_oracle)),
        ("rank invariance", Box::new(|| rank_invariance(&extracted))),
        ("FI affine invariance", Box::new(|| fi_affine(&extracted))),
        ("FI oracle", Box::new(fi_oracle)),
        ("independence behaviour", Box::new(independence)),
        ("AMC behaviour", Box::new(amc_duplicate)),
        ("agent sanity", Box::new(agent_sanity)),
        ("determinism", Box::new(determinism)),
        (
            "desk-scale performance",
            Box::new(|| full_pipeline(big.path())),
        ),
        ("report shape", Box::new(|| report_shape(big.path()))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "\n{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
