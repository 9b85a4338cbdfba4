//! Command-line surface for batch computations: shape validation, convex
//! enumeration, widths, the two distances, variety export, isometry
//! verification runs, and reproduction of the built-in worked examples.

use clap::{Parser, Subcommand};
use nvee::fixtures;
use nvee::harness::{random_instance, verify_isometry, ShapeBounds};
use nvee::{
    bottleneck_distance, build_system, count_points, enumerate_sigma, interleaving_distance,
    maximal_translation, width, Barcode, BarcodeSpec, ConvexModule, Poset, PosetSpec, PrimeField,
    Vertex,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nvee", version, about = "Distances between persistence modules on suspended branch posets", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the branch conditions and print the shape, or the failing condition.
    Validate { poset: PathBuf },
    /// List every convex support of the poset.
    Sigma { poset: PathBuf },
    /// Width of the convex module with the given support, e.g. '[0,1,2]'.
    Width { poset: PathBuf, support: String },
    /// Interleaving distance between two barcode files by witness search.
    Dist {
        poset: PathBuf,
        barcode_a: PathBuf,
        barcode_b: PathBuf,
        /// Prime fields to search over.
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3])]
        fields: Vec<u32>,
    },
    /// Bottleneck distance between two barcode files by matching.
    Bottleneck {
        poset: PathBuf,
        barcode_a: PathBuf,
        barcode_b: PathBuf,
    },
    /// Print (and optionally export) the bilinear system of interleavings
    /// at the maximal translation of the given level.
    Variety {
        poset: PathBuf,
        barcode_a: PathBuf,
        barcode_b: PathBuf,
        #[arg(long)]
        eps: u64,
        /// Write the text form here (a .json twin is written next to it).
        #[arg(long)]
        export: Option<PathBuf>,
        /// Also count the solutions exhaustively.
        #[arg(long)]
        count: bool,
        /// Field order for --count.
        #[arg(long, default_value_t = 2)]
        field: u32,
    },
    /// Verify that the two distances agree on seeded random instances.
    Isometry {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Maximal number of branches.
        #[arg(long, default_value_t = 3)]
        branches: usize,
        #[arg(long, default_value_t = 4)]
        max_length: usize,
        #[arg(long, default_value_t = 5)]
        max_bars: usize,
        /// Include wall-clock times in the reports.
        #[arg(long)]
        timing: bool,
    },
    /// Re-derive a built-in worked example and check it against its
    /// embedded expectations: ex4, exnew or ex3.
    Reproduce { example: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}

enum Failure {
    Parse(String),
    Verification(String),
}

fn parse_err<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Parse(e.to_string())
}

fn load_poset(path: &PathBuf) -> Result<Poset, Failure> {
    let text = std::fs::read_to_string(path).map_err(parse_err)?;
    let spec = PosetSpec::parse(&text).map_err(parse_err)?;
    spec.build().map_err(parse_err)
}

/// n-Vee operations need the branch structure; detect it for general files.
fn load_nvee(path: &PathBuf) -> Result<Poset, Failure> {
    let poset = load_poset(path)?;
    if poset.shape().is_some() {
        return Ok(poset);
    }
    poset.detect_shape().map_err(parse_err)
}

fn load_barcode(poset: &Poset, path: &PathBuf) -> Result<Barcode, Failure> {
    let text = std::fs::read_to_string(path).map_err(parse_err)?;
    let spec = BarcodeSpec::parse(&text).map_err(parse_err)?;
    spec.build(poset).map_err(parse_err)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Validate { poset } => {
            let p = load_poset(&poset)?;
            match p.validate_nvee() {
                Ok(shape) => {
                    println!(
                        "n-Vee with branch lengths {:?}, asymmetric: {}",
                        shape.branch_lengths, shape.asymmetric
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(rejection) => {
                    println!("rejected: {rejection}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Sigma { poset } => {
            let p = load_poset(&poset)?;
            let sigma = enumerate_sigma(&p, 16).map_err(parse_err)?;
            for module in &sigma {
                println!("{}", serde_json::to_string(&module.support().to_vec()).unwrap());
            }
            println!("# {} convex supports", sigma.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Width { poset, support } => {
            let p = load_nvee(&poset)?;
            let vs: Vec<Vertex> = serde_json::from_str(&support).map_err(parse_err)?;
            let module = ConvexModule::from_vertices(&p, &vs).map_err(parse_err)?;
            println!("{}", width(&p, &module).map_err(parse_err)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Dist {
            poset,
            barcode_a,
            barcode_b,
            fields,
        } => {
            let p = load_nvee(&poset)?;
            let a = load_barcode(&p, &barcode_a)?;
            let b = load_barcode(&p, &barcode_b)?;
            let d = interleaving_distance(&p, &a, &b, &fields).map_err(parse_err)?;
            println!("{d}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Bottleneck {
            poset,
            barcode_a,
            barcode_b,
        } => {
            let p = load_nvee(&poset)?;
            let a = load_barcode(&p, &barcode_a)?;
            let b = load_barcode(&p, &barcode_b)?;
            let d = bottleneck_distance(&p, &a, &b).map_err(parse_err)?;
            println!("{d}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Variety {
            poset,
            barcode_a,
            barcode_b,
            eps,
            export,
            count,
            field,
        } => {
            let p = load_nvee(&poset)?;
            let a = load_barcode(&p, &barcode_a)?;
            let b = load_barcode(&p, &barcode_b)?;
            let lam = maximal_translation(&p, eps).map_err(parse_err)?;
            let sys = build_system(&p, &a, &b, &lam, &lam);
            let text = sys.render_text(&lam, &lam);
            print!("{text}");
            if let Some(path) = export {
                std::fs::write(&path, &text).map_err(parse_err)?;
                let json_path = path.with_extension("json");
                std::fs::write(&json_path, serde_json::to_string_pretty(&sys).unwrap())
                    .map_err(parse_err)?;
            }
            if count {
                let f = PrimeField::new(field).map_err(parse_err)?;
                let n = count_points(&sys, &f, 16).map_err(parse_err)?;
                println!("# {n} solutions over F_{field}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Isometry {
            seed,
            trials,
            branches,
            max_length,
            max_bars,
            timing,
        } => {
            let bounds = ShapeBounds {
                max_branches: branches,
                max_branch_length: max_length,
                max_bars,
                ..ShapeBounds::default()
            };
            let mut hard_failures = 0;
            for s in seed..seed + trials {
                let instance = random_instance(s, &bounds);
                let started = std::time::Instant::now();
                match verify_isometry(&instance) {
                    Ok(mut report) => {
                        if timing {
                            report.millis = Some(started.elapsed().as_millis());
                        }
                        if !report.pass {
                            hard_failures += 1;
                        }
                        println!("{}", serde_json::to_string(&report).unwrap());
                    }
                    Err(e) => {
                        hard_failures += 1;
                        println!(
                            "{}",
                            serde_json::json!({ "seed": s, "pass": false, "error": e.to_string() })
                        );
                    }
                }
            }
            if hard_failures > 0 {
                return Err(Failure::Verification(format!(
                    "{hard_failures} of {trials} instances failed"
                )));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Reproduce { example } => match example.as_str() {
            "ex4" => reproduce_ex4(),
            "exnew" => reproduce_exnew(),
            "ex3" => reproduce_ex3(),
            other => Err(Failure::Parse(format!(
                "unknown example '{other}' (expected ex4, exnew or ex3)"
            ))),
        },
    }
}

fn reproduce_ex4() -> Result<ExitCode, Failure> {
    let ex = fixtures::two_vee_example();
    let f2 = PrimeField::new(2).unwrap();
    let f3 = PrimeField::new(3).unwrap();

    println!("== block X vs Y + Z at level a ==");
    let (x, yz) = &ex.x_block;
    let sys = build_system(&ex.poset, x, yz, &ex.lam, &ex.lam);
    print!("{}", sys.render_text(&ex.lam, &ex.lam));
    let expected = vec![
        (vec![(0, 0)], 1),
        (vec![(0, 0), (1, 1)], 1),
        (vec![(1, 0)], 0),
    ];
    let shape_ok = sys.normalized_equations() == expected;
    let c2 = count_points(&sys, &f2, 12).map_err(parse_err)?;
    let c3 = count_points(&sys, &f3, 12).map_err(parse_err)?;
    println!("# solutions: {c2} over F_2, {c3} over F_3 (expected 2, 6)");

    println!("== block A + B vs C + D at level a ==");
    let (ab, cd) = &ex.m_block;
    let sys2 = build_system(&ex.poset, ab, cd, &ex.lam, &ex.lam);
    print!("{}", sys2.render_text(&ex.lam, &ex.lam));
    let g2 = count_points(&sys2, &f2, 12).map_err(parse_err)?;
    let g3 = count_points(&sys2, &f3, 12).map_err(parse_err)?;
    println!("# solutions: {g2} over F_2, {g3} over F_3 (expected |GL_2| = 6, 48)");

    if shape_ok && c2 == 2 && c3 == 6 && g2 == 6 && g3 == 48 {
        println!("reproduction: OK");
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Verification("ex4 outputs differ from the embedded fixtures".into()))
    }
}

fn reproduce_exnew() -> Result<ExitCode, Failure> {
    let ex = fixtures::staircase_example();
    ex.verify_relations().map_err(Failure::Verification)?;
    let a = ex.poset.weight().a;
    println!("eps,points_F2,points_F3");
    let f2 = PrimeField::new(2).unwrap();
    let f3 = PrimeField::new(3).unwrap();
    let s2 = ex.staircase(&f2);
    let s3 = ex.staircase(&f3);
    let mut ok = true;
    for (&(eps, c2), &(_, c3)) in s2.iter().zip(&s3) {
        println!("{eps},{c2},{c3}");
        let expect = |q: u64| {
            if eps == 0 {
                0
            } else if eps < 2 * a {
                q - 1
            } else if eps < 3 * a {
                q
            } else {
                1
            }
        };
        ok &= c2 == expect(2) && c3 == expect(3);
    }
    let i = Barcode::new(vec![ex.a]);
    let m = Barcode::new(vec![ex.b]);
    let d = interleaving_distance(&ex.poset, &i, &m, &[2, 3]).map_err(parse_err)?;
    println!("D(A,B) = {d} (= a)");
    if ok && d == a {
        println!("reproduction: OK");
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Verification("staircase differs from the embedded fixture".into()))
    }
}

fn reproduce_ex3() -> Result<ExitCode, Failure> {
    match fixtures::reconstruct_variety_example() {
        Some(rec) => {
            println!("reconstructed supports:");
            println!("  A = {:?}", rec.a.support().to_vec());
            println!("  B = {:?}", rec.b.support().to_vec());
            println!("  C = {:?}", rec.c.support().to_vec());
            println!("  D = {:?}", rec.d.support().to_vec());
            print!("{}", rec.system.render_text(&rec.lam, &rec.lam));
            let f2 = PrimeField::new(2).unwrap();
            let f3 = PrimeField::new(3).unwrap();
            println!(
                "# solutions: {} over F_2, {} over F_3 (expected (q-1)^2 q = 2, 12)",
                count_points(&rec.system, &f2, 12).map_err(parse_err)?,
                count_points(&rec.system, &f3, 12).map_err(parse_err)?
            );
            println!("reproduction: OK");
            Ok(ExitCode::SUCCESS)
        }
        None => Err(Failure::Verification(
            "no supports satisfying all reconstruction constraints were found; example skipped".into(),
        )),
    }
}
