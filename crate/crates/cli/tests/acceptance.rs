//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits 0 after printing the summary so the workspace test run stays
//! usable; set `ACCEPTANCE_STRICT=1` to exit 1 when a gating criterion fails.

use std::path::{Path, PathBuf};
use std::time::Instant;

use chaocrypt::analysis::{
    self, chi_square, correlation, entropy, glcm_from_pixels, glcm_metrics, key_sensitivity, npcr, psnr, uaci,
    Direction, Psnr, DEFAULT_SAMPLING_SEED,
};
use chaocrypt::bench::{self, MIN_TRIALS};
use chaocrypt::chaotic_maps::{TdErcsSeed, TdErcsState};
use chaocrypt::cipher::{decrypt_audio, decrypt_image, encrypt_image, CipherConfig, CipherEnvelope, ImageBuffer};
use chaocrypt::sbox;
use chaocrypt_cli::files::{self, Wav};
use chaocrypt_cli::payloads::{random_image, tone, PayloadChoice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Suite {
    failed: Vec<&'static str>,
}

impl Suite {
    fn record(&mut self, id: &'static str, name: &str, pass: bool, detail: String) {
        println!("[{}] {id} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(id);
        }
    }

    fn info(&self, id: &str, detail: String) {
        println!("       {id} info: {detail}");
    }
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn round_trip(suite: &mut Suite) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = Vec::new();
    for i in 0..200 {
        let (w, h) = (rng.gen_range(2..=128), rng.gen_range(2..=128));
        let img = if i % 10 == 9 {
            ImageBuffer::filled(w, h, rng.gen()).unwrap()
        } else {
            random_image(w, h, &mut rng)
        };
        let secret = format!("round-trip-{i}");
        let cfg = if i % 2 == 0 {
            CipherConfig::default()
        } else {
            CipherConfig::with_secret(secret.as_bytes())
        };
        let sealed = encrypt_image(&img, &cfg).unwrap().to_bytes();
        let env = CipherEnvelope::from_bytes(&sealed).unwrap();
        if decrypt_image(&env, Some(secret.as_bytes())).unwrap() != img {
            mismatches.push(format!("image {i} ({w}x{h})"));
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let lengths = [1usize, 2, 3, 511, 512, 1000, 4097, 10_000, 22_050, 38_400];
    for (i, &n) in lengths.iter().enumerate() {
        let samples: Vec<i16> = if i % 2 == 0 {
            tone(n)
        } else {
            (0..n).map(|_| rng.gen()).collect()
        };
        let wav = files::encode_wav(&Wav {
            sample_rate: 44_100,
            samples: samples.clone(),
        })
        .unwrap();
        let (src, che, back) = (
            dir.path().join(format!("a{i}.wav")),
            dir.path().join(format!("a{i}.che")),
            dir.path().join(format!("b{i}.wav")),
        );
        files::write_atomic(&src, &wav).unwrap();
        let p = |x: &Path| x.to_str().unwrap().to_owned();
        let secret = format!("wav-{i}");
        let mut enc = vec![
            "chaocrypt".to_owned(),
            "encrypt".into(),
            "--in".into(),
            p(&src),
            "--out".into(),
            p(&che),
        ];
        let mut dec = vec![
            "chaocrypt".to_owned(),
            "decrypt".into(),
            "--in".into(),
            p(&che),
            "--out".into(),
            p(&back),
        ];
        if i % 2 == 1 {
            for args in [&mut enc, &mut dec] {
                args.extend(["--secret".to_owned(), secret.clone()]);
            }
        }
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let ok = chaocrypt_cli::run_with(enc, &mut out, &mut err) == 0
            && chaocrypt_cli::run_with(dec, &mut out, &mut err) == 0
            && std::fs::read(&back).unwrap() == wav;
        if !ok {
            mismatches.push(format!("wav {i} ({n} frames)"));
        }
        let env = CipherEnvelope::from_bytes(&std::fs::read(&che).unwrap()).unwrap();
        if decrypt_audio(&env, Some(secret.as_bytes())).unwrap() != samples {
            mismatches.push(format!("wav {i} samples"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    suite.record(
        "C1",
        "round trip (200 images 2..128 both key modes, 10 WAV files)",
        mismatches.is_empty() && secs < 30.0,
        format!(
            "{} mismatches {:?}, {secs:.2} s (limit 30 s)",
            mismatches.len(),
            mismatches
        ),
    );
}

fn tdercs_oracle(suite: &mut Suite) {
    let path = manifest_dir().join("../core/tests/oracles/tdercs_expected.txt");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut seeds: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let key = f[..4].join(" ");
        let xy = (f[5].parse().unwrap(), f[6].parse().unwrap());
        match seeds.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(xy),
            None => seeds.push((key, vec![xy])),
        }
    }
    let mut all_match = true;
    let mut on_ellipse = true;
    let mut worst_residual = 0.0f64;
    let mut details = Vec::new();
    for (key, expected) in &seeds {
        let f: Vec<&str> = key.split(' ').collect();
        let seed = TdErcsSeed::new(
            f[0].parse().unwrap(),
            f[1].parse().unwrap(),
            f[2].parse().unwrap(),
            f[3].parse().unwrap(),
        )
        .unwrap();
        let mut state = TdErcsState::new(&seed).unwrap();
        let mut first_miss = None;
        let mut first_ten = 0.0f64;
        for (i, &(x, y)) in expected.iter().take(100).enumerate() {
            state.step().unwrap();
            let err = (state.x() - x).abs().max((state.y() - y).abs());
            if i < 10 {
                first_ten = first_ten.max(err);
            }
            if err > 1e-10 && first_miss.is_none() {
                first_miss = Some(i + 1);
            }
            worst_residual = worst_residual.max(state.residual());
        }
        on_ellipse &= worst_residual <= 1e-9;
        all_match &= first_miss.is_none() && expected.len() >= 100;
        details.push(format!(
            "[{key}] first 10 max err {first_ten:.1e}, first iterate beyond 1e-10: {}",
            first_miss.map_or("none".into(), |i| i.to_string())
        ));
    }
    suite.record(
        "C2",
        "TD-ERCS vs 60-digit reference, 100 iterates x 5 seeds to 1e-10; ellipse 1e-9",
        all_match && on_ellipse && seeds.len() == 5,
        format!(
            "orbit match {all_match}, ellipse residual max {worst_residual:.1e} ({})",
            if on_ellipse { "ok" } else { "exceeded" }
        ),
    );
    for d in details {
        suite.info("C2", d);
    }
}

fn camera() -> ImageBuffer {
    files::read_image(&manifest_dir().join("tests/data/camera.pgm")).unwrap()
}

fn table_metrics(suite: &mut Suite) {
    let start = Instant::now();
    let plain = camera();
    let cfg = CipherConfig::default();
    let env = encrypt_image(&plain, &cfg).unwrap();
    let cipher = ImageBuffer::new(512, 512, env.body.clone()).unwrap();
    let report = analysis::full_report(&plain, &cipher, &cfg, DEFAULT_SAMPLING_SEED).unwrap();
    let c = &report.cipher;
    let ccs = [c.h_cc, c.v_cc, c.d_cc];
    let cc_ok = ccs.iter().all(|v| v.is_some_and(|v| v.abs() <= 0.02));
    let checks = [
        ("entropy>=7.95", c.entropy >= 7.95),
        ("|cc|<=0.02", cc_ok),
        ("npcr>=98", report.npcr >= 98.0),
        ("uaci in [30,36]", (30.0..=36.0).contains(&report.uaci)),
        ("energy<=0.05", c.energy <= 0.05),
        ("homogeneity<=0.45", c.homogeneity <= 0.45),
        ("contrast>=9", c.contrast >= 9.0),
    ];
    let secs = start.elapsed().as_secs_f64();
    let failing: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    suite.record(
        "C3",
        "security metrics on 512x512 cameraman",
        failing.is_empty() && secs < 60.0,
        format!(
            "entropy {:.4}, H/V/D cc {:.4}/{:.4}/{:.4}, npcr {:.4}, uaci {:.4}, energy {:.6}, homogeneity {:.4}, contrast {:.1}, {secs:.2} s; failing {:?}",
            c.entropy,
            c.h_cc.unwrap_or(f64::NAN),
            c.v_cc.unwrap_or(f64::NAN),
            c.d_cc.unwrap_or(f64::NAN),
            report.npcr,
            report.uaci,
            c.energy,
            c.homogeneity,
            c.contrast,
            failing
        ),
    );
    let all_pairs: Vec<String> = [Direction::Horizontal, Direction::Vertical, Direction::Diagonal]
        .into_iter()
        .map(|d| format!("{:.4}", correlation(&cipher, d, usize::MAX, 0).unwrap()))
        .collect();
    suite.info("C3", format!("all-pairs H/V/D cc {}", all_pairs.join("/")));
    let g8 = glcm_from_pixels(512, 512, cipher.pixels(), 8).unwrap();
    suite.info(
        "C3",
        format!(
            "8-level GLCM contrast {:.4}, energy {:.4}, homogeneity {:.4}",
            g8.contrast, g8.energy, g8.homogeneity
        ),
    );
    let psnr_text = match report.psnr {
        Psnr::Db(v) => format!("{v:.4} dB"),
        Psnr::Infinite => "infinite".into(),
    };
    suite.info(
        "C3",
        format!(
            "key sensitivity {:.4}, chi-square {:.2}, mse {:.2}, psnr {psnr_text}",
            report.key_sensitivity, c.chi_square.statistic, report.mse
        ),
    );
}

fn chi_square_trials(suite: &mut Suite) {
    let full = camera();
    let crop = ImageBuffer::from_fn(256, 256, |x, y| full.get(x + 128, y + 128)).unwrap();
    let mut passes = 0;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let cfg = CipherConfig::with_secret(format!("chi-trial-{i}"));
        let env = encrypt_image(&crop, &cfg).unwrap();
        let chi = chi_square(&ImageBuffer::new(256, 256, env.body).unwrap());
        worst = worst.max(chi.statistic);
        passes += chi.passed as usize;
    }
    suite.record(
        "C4",
        "chi-square at 0.05 on 256x256 ciphertexts, 100 random keys",
        passes >= 95,
        format!("{passes}/100 below 293.2478 (need 95), max statistic {worst:.2}"),
    );
}

fn key_sensitivity_trials(suite: &mut Suite) {
    let mut rates = Vec::new();
    for i in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
        let img = random_image(256, 256, &mut rng);
        rates.push(key_sensitivity(&img, &CipherConfig::default()).unwrap());
    }
    let min = rates.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    suite.record(
        "C5",
        "key sensitivity, one-bit kappa1 flip, 20 random 256x256 images",
        min >= 98.0,
        format!("min {min:.4}%, mean {mean:.4}% (need >= 98)"),
    );
}

fn sbox_bijection(suite: &mut Suite) {
    let report = sbox::validate_sbox();
    let inverse = (0..=255u8).all(|b| sbox::sbox_inverse(sbox::sbox_forward(b)) == b);
    let forward = (0..=255u8).all(|b| sbox::sbox_forward(sbox::sbox_inverse(b)) == b);
    suite.record(
        "C6",
        "S-box bijection over 256 values",
        report.is_bijective && inverse && forward,
        format!(
            "bijective {}, inverse∘forward identity {inverse}, forward∘inverse identity {forward}",
            report.is_bijective
        ),
    );
}

fn metric_oracles(suite: &mut Suite) {
    let img = |w, h, px: Vec<u8>| ImageBuffer::new(w, h, px).unwrap();
    let zeros = img(2, 2, vec![0; 4]);
    let mut checks: Vec<(&str, bool)> = Vec::new();
    let one = img(2, 2, vec![0, 0, 0, 9]);
    checks.push(("npcr 2x2 one pixel = 25", npcr(&zeros, &one).unwrap() == 25.0));
    checks.push(("npcr identical = 0", npcr(&zeros, &zeros).unwrap() == 0.0));
    let all = img(2, 2, vec![255; 4]);
    checks.push(("npcr all differ = 100", npcr(&zeros, &all).unwrap() == 100.0));
    let d51 = img(2, 2, vec![0, 51, 0, 0]);
    checks.push((
        "uaci one pixel by 51 = 5.0",
        (uaci(&zeros, &d51).unwrap() - 5.0).abs() < 1e-12,
    ));
    checks.push((
        "uaci 0 vs 255 = 100",
        (uaci(&zeros, &all).unwrap() - 100.0).abs() < 1e-12,
    ));
    let constant = ImageBuffer::filled(16, 16, 77).unwrap();
    let g = glcm_metrics(&constant);
    checks.push((
        "constant glcm: contrast 0, energy 1, homogeneity 1",
        g.contrast == 0.0 && g.energy == 1.0 && g.homogeneity == 1.0,
    ));
    let pair = glcm_from_pixels(2, 1, &[0, 255], 256).unwrap();
    checks.push((
        "1x2 [0,255] glcm",
        pair.contrast == 65025.0 && pair.energy == 1.0 && (pair.homogeneity - 1.0 / 256.0).abs() < 1e-15,
    ));
    let checker = ImageBuffer::from_fn(8, 8, |x, y| if (x + y) % 2 == 0 { 0 } else { 255 }).unwrap();
    let gc = glcm_metrics(&checker);
    checks.push(("checkerboard glcm", gc.contrast == 65025.0 && gc.energy == 0.5));
    let plus1 = ImageBuffer::filled(16, 16, 78).unwrap();
    let p = match psnr(&constant, &plus1).unwrap() {
        Psnr::Db(v) => v,
        Psnr::Infinite => f64::NAN,
    };
    checks.push(("psnr diff 1 = 48.13 +- 0.01", (p - 48.13).abs() <= 0.01));
    checks.push((
        "psnr identical = infinite",
        psnr(&constant, &constant).unwrap() == Psnr::Infinite,
    ));
    let full = ImageBuffer::from_fn(16, 16, |x, y| (16 * y + x) as u8).unwrap();
    checks.push(("entropy uniform = 8", entropy(&full) == 8.0));
    checks.push(("entropy constant = 0", entropy(&constant) == 0.0));
    let halves = ImageBuffer::from_fn(4, 4, |x, _| if x < 2 { 10 } else { 20 }).unwrap();
    checks.push(("entropy 50/50 = 1", entropy(&halves) == 1.0));
    checks.push((
        "chi-square uniform = 0",
        chi_square(&full).statistic == 0.0 && chi_square(&full).passed,
    ));
    checks.push((
        "chi-square constant = 255n",
        chi_square(&constant).statistic == 255.0 * 256.0,
    ));
    let rows = ImageBuffer::from_fn(8, 8, |_, y| (y * 30) as u8).unwrap();
    checks.push((
        "H correlation of row-constant image = 1",
        (correlation(&rows, Direction::Horizontal, 5000, 1).unwrap() - 1.0).abs() < 1e-12,
    ));
    checks.push((
        "constant image correlation undefined",
        correlation(&constant, Direction::Vertical, 100, 1).is_err(),
    ));
    let failing: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    suite.record(
        "C7",
        "metric unit oracles",
        failing.is_empty(),
        format!(
            "{}/{} exact; failing {:?}",
            checks.len() - failing.len(),
            checks.len(),
            failing
        ),
    );
}

fn bench_shape(suite: &mut Suite) {
    let cfg = CipherConfig::default();
    let mut results = Vec::new();
    for choice in PayloadChoice::All.expand() {
        let payload = choice.build(128);
        results.push(bench::bench_chaos(&payload, &cfg, MIN_TRIALS).unwrap());
        if bench::aes_available() {
            results.push(bench::bench_aes_baseline(&payload, MIN_TRIALS).unwrap());
        }
    }
    let table = bench::compare_report(&results);
    let shaped = table.payloads.len() == 4
        && results
            .iter()
            .all(|r| r.trials >= MIN_TRIALS && r.variance_seconds2 >= 0.0)
        && table.cells.iter().flatten().all(Option::is_some)
        && serde_json::from_str::<bench::ComparisonTable>(&table.to_json()).unwrap() == table;
    suite.record(
        "C8",
        "benchmark report for image, 75-frame batch, 512 and 38400 audio frames",
        shaped,
        format!(
            "{} schemes x {} payloads, {} trials each",
            table.schemes.len(),
            table.payloads.len(),
            MIN_TRIALS
        ),
    );
    for line in table.to_text().lines() {
        suite.info("C8", line.to_owned());
    }

    let frame = bench::Payload::Image(camera());
    let chaos = bench::bench_chaos(&frame, &cfg, MIN_TRIALS).unwrap();
    match bench::bench_aes_baseline(&frame, MIN_TRIALS) {
        Ok(aes) => println!(
            "[{}] C8-soft chaos faster than AES-128-CBC on 512x512 (non-gating): chaos {:.6} s, AES {:.6} s, hardware AES {:?}",
            if chaos.mean_seconds < aes.mean_seconds { "PASS" } else { "FAIL" },
            chaos.mean_seconds,
            aes.mean_seconds,
            aes.hardware_aes
        ),
        Err(e) => println!("[FAIL] C8-soft chaos faster than AES-128-CBC on 512x512 (non-gating): {e}"),
    }
}

fn main() {
    // libtest-style flags such as --nocapture or filters are accepted and ignored
    let _ = std::env::args();
    let mut suite = Suite { failed: Vec::new() };
    round_trip(&mut suite);
    tdercs_oracle(&mut suite);
    table_metrics(&mut suite);
    chi_square_trials(&mut suite);
    key_sensitivity_trials(&mut suite);
    sbox_bijection(&mut suite);
    metric_oracles(&mut suite);
    bench_shape(&mut suite);
    println!(
        "acceptance: {}/8 gating criteria passed{}",
        8 - suite.failed.len(),
        if suite.failed.is_empty() {
            String::new()
        } else {
            format!("; failed {:?}", suite.failed)
        }
    );
    if std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") && !suite.failed.is_empty() {
        std::process::exit(1);
    }
}
