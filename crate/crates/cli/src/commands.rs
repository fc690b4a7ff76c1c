use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::Value;

use fourphoton::analysis::{
    biseparable_bound, correlation_classes, correlations, fidelity_from_settings, max_schmidt_overlap, setting_cover,
    witness_report, CorrelationClass, ZERO_TOL,
};
use fourphoton::circuit::{run_pipeline, PipelineConfig};
use fourphoton::family::{alpha, catalog, crossing_angles, find_crossings, probability, state_at};
use fourphoton::imperfections::{higher_order_fourfolds, noisy_state, NoiseConfig};
use fourphoton::qubit::{basis_label, DensityMatrix, N_QUBITS};
use fourphoton::tomo::{density_to_json, reconstruct_and_report, write_counts_csv};
use fourphoton::{gamma_grid, Error, Result};

use crate::format::{csv, grid, jnum, num, object, table, to_json};
use crate::{Command, FormatArg, NoiseArgs};

/// Relative output paths are resolved against this directory when it is set.
pub const OUT_DIR_VAR: &str = "FOURPHOTON_OUT_DIR";

pub fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::Derive { gamma, format } => derive(gamma.gamma, &format),
        Command::Sweep { steps, out } => sweep(steps, out.as_deref()),
        Command::Catalog { format } => catalog_cmd(&format),
        Command::Crossings { format } => crossings(&format),
        Command::Correlations { gamma, format } => correlations_cmd(gamma.gamma, &format),
        Command::Witness { gamma, noise, format } => witness(gamma.gamma, &noise, &format),
        Command::Tomo {
            gamma,
            shots,
            seed,
            method,
            noise,
            out,
            format,
        } => {
            let report = reconstruct_and_report(gamma.gamma, &noise_config(&noise)?, shots, seed, method)?;
            if let Some(dir) = out {
                let dir = resolve(&dir);
                fs::create_dir_all(&dir)?;
                if let Some(records) = &report.records {
                    write_counts_csv(fs::File::create(dir.join("counts.csv"))?, records)?;
                }
                fs::write(
                    dir.join("rho.json"),
                    density_to_json(&report.reconstruction.rho)? + "\n",
                )?;
            }
            let w = &report.witness;
            let fields = vec![
                ("gamma", jnum(gamma.gamma)),
                ("gamma_pi", jnum(gamma.gamma / PI)),
                ("shots", shots.map_or(Value::String("exact".into()), Value::from)),
                ("seed", Value::from(seed)),
                ("method", Value::String(method.to_string())),
                ("fidelity", jnum(w.fidelity)),
                ("true_fidelity", jnum(report.true_fidelity)),
                ("c", jnum(w.c)),
                ("witness_value", jnum(w.witness_value)),
                ("detected", Value::Bool(w.detected)),
                ("pairwise_ef", jnum(report.pairwise.0)),
                ("pairwise_gh", jnum(report.pairwise.1)),
                ("negative_mass", jnum(report.reconstruction.negative_mass)),
            ];
            Ok(render(fields, &format))
        }
        Command::Noise { gamma, noise, out } => noise_cmd(gamma, &noise, out.as_deref()),
    }
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(base) if path.is_relative() => Path::new(&base).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_or_return(text: String, out: Option<&Path>) -> Result<String> {
    match out {
        Some(p) => {
            let p = resolve(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(&p, text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => num(n.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    }
}

fn render(fields: Vec<(&str, Value)>, format: &FormatArg) -> String {
    if format.json {
        to_json(&object(fields))
    } else {
        table(
            &fields
                .iter()
                .map(|(k, v)| (k.to_string(), value_text(v)))
                .collect::<Vec<_>>(),
        )
    }
}

fn render_rows(header: &[&str], rows: Vec<Vec<Value>>, format: &FormatArg) -> String {
    if format.json {
        let objs = rows
            .into_iter()
            .map(|r| object(header.iter().copied().zip(r).collect()))
            .collect();
        to_json(&Value::Array(objs))
    } else {
        let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(value_text).collect()).collect();
        grid(header, &cells)
    }
}

fn noise_config(args: &NoiseArgs) -> Result<NoiseConfig> {
    let mut cfg = match &args.noise_json {
        Some(p) => NoiseConfig::from_json(&fs::read_to_string(p)?)?,
        None => NoiseConfig::default(),
    };
    if let Some(t) = args.tau {
        cfg.pair_probability = t;
    }
    if let Some(e) = args.efficiency {
        cfg.efficiency = e;
    }
    if let Some(v) = args.visibility {
        cfg.visibility = v;
    }
    if let Some(q) = args.depolarizing {
        cfg.depolarizing = q;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn derive(gamma: f64, format: &FormatArg) -> Result<String> {
    let point = state_at(gamma)?;
    let sim = run_pipeline(&PipelineConfig::new(gamma)?)?;
    let overlap = sim.state.overlap(&point.state);
    let amps = point.state.amplitudes();
    let mut fields = vec![
        ("gamma", jnum(gamma)),
        ("gamma_pi", jnum(gamma / PI)),
        ("alpha", jnum(point.alpha)),
        ("probability", jnum(point.probability)),
        ("simulated_probability", jnum(sim.probability)),
        ("overlap", jnum(overlap)),
    ];
    if format.json {
        let amp_obj = (0..amps.len())
            .map(|i| (basis_label(i, N_QUBITS), jnum(amps[i].re)))
            .collect::<serde_json::Map<_, _>>();
        fields.push(("amplitudes", Value::Object(amp_obj)));
        return Ok(to_json(&object(fields)));
    }
    let mut rows: Vec<(String, String)> = fields.iter().map(|(k, v)| (k.to_string(), value_text(v))).collect();
    rows.extend((0..amps.len()).map(|i| (format!("amp {}", basis_label(i, N_QUBITS)), num(amps[i].re))));
    Ok(table(&rows))
}

const SWEEP_HEADER: [&str; 10] = [
    "gamma",
    "gamma_pi",
    "alpha",
    "probability",
    "class_i",
    "class_ii",
    "class_iii",
    "class_iv",
    "class_v",
    "c_bound",
];

fn sweep(steps: usize, out: Option<&Path>) -> Result<String> {
    if steps < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "steps",
            value: steps as f64,
            range: ">= 2",
        });
    }
    let rows = gamma_grid(steps)
        .par_iter()
        .map(|&g| {
            let classes = correlation_classes(g)?;
            let mut row = vec![num(g), num(g / PI), num(alpha(g)), num(probability(g))];
            row.extend(classes.iter().map(|&v| num(v)));
            row.push(num(biseparable_bound(g)?));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    write_or_return(csv(&SWEEP_HEADER, &rows), out)
}

fn catalog_cmd(format: &FormatArg) -> Result<String> {
    let rows = catalog()
        .into_iter()
        .map(|e| {
            vec![
                Value::String(e.name.to_string()),
                jnum(e.gamma),
                jnum(e.gamma / PI),
                jnum(e.alpha),
                jnum(probability(e.gamma)),
            ]
        })
        .collect();
    Ok(render_rows(
        &["name", "gamma", "gamma_pi", "alpha", "probability"],
        rows,
        format,
    ))
}

fn crossings(format: &FormatArg) -> Result<String> {
    let found = find_crossings();
    let rows = crossing_angles(&found)
        .into_iter()
        .map(|g| {
            let pairs: Vec<String> = found
                .iter()
                .filter(|c| (c.gamma - g).abs() < 1e-7)
                .map(|c| format!("{}={}", c.classes.0, c.classes.1))
                .collect();
            vec![jnum(g), jnum(g / PI), jnum(alpha(g)), Value::String(pairs.join(" "))]
        })
        .collect();
    Ok(render_rows(&["gamma", "gamma_pi", "alpha", "classes"], rows, format))
}

fn correlations_cmd(gamma: f64, format: &FormatArg) -> Result<String> {
    let classes = correlation_classes(gamma)?;
    let t = correlations(&state_at(gamma)?.state)?;
    let terms: Vec<Vec<Value>> = t
        .nonzero(ZERO_TOL)
        .into_iter()
        .map(|(p, v)| {
            let class = CorrelationClass::of(p).map_or("-".to_string(), |c| c.to_string());
            vec![Value::String(p.to_string()), jnum(v), Value::String(class)]
        })
        .collect();
    if format.json {
        let class_obj = CorrelationClass::ALL
            .iter()
            .zip(classes)
            .map(|(c, v)| (c.to_string(), jnum(v)))
            .collect::<serde_json::Map<_, _>>();
        let term_objs = terms
            .into_iter()
            .map(|r| object(["term", "value", "class"].into_iter().zip(r).collect()))
            .collect();
        return Ok(to_json(&object(vec![
            ("gamma", jnum(gamma)),
            ("classes", Value::Object(class_obj)),
            ("terms", Value::Array(term_objs)),
        ])));
    }
    let mut out = table(
        &CorrelationClass::ALL
            .iter()
            .zip(classes)
            .map(|(c, v)| (format!("class {c}"), num(v)))
            .collect::<Vec<_>>(),
    );
    out.push('\n');
    out.push_str(&render_rows(&["term", "value", "class"], terms, format));
    Ok(out)
}

fn witness(gamma: f64, noise: &NoiseArgs, format: &FormatArg) -> Result<String> {
    let cfg = noise_config(noise)?;
    let rho: DensityMatrix = noisy_state(gamma, &cfg)?;
    let report = witness_report(&rho, gamma)?;
    let (_, cut) = max_schmidt_overlap(&state_at(gamma)?.state);
    let cover = setting_cover(gamma)?;
    let cover_fidelity = fidelity_from_settings(&rho, &cover)?;
    let settings: Vec<String> = cover.settings.iter().map(|s| s.to_string()).collect();
    let fields = vec![
        ("gamma", jnum(gamma)),
        ("gamma_pi", jnum(gamma / PI)),
        ("c", jnum(report.c)),
        ("cut", Value::String(cut.to_string())),
        ("fidelity", jnum(report.fidelity)),
        ("witness_value", jnum(report.witness_value)),
        ("detected", Value::Bool(report.detected)),
        ("settings_count", Value::from(settings.len())),
        ("cover_fidelity", jnum(cover_fidelity)),
        (
            "settings",
            if format.json {
                Value::Array(settings.iter().cloned().map(Value::String).collect())
            } else {
                Value::String(settings.join(" "))
            },
        ),
    ];
    Ok(render(fields, format))
}

const NOISE_HEADER: [&str; 9] = [
    "name",
    "gamma",
    "gamma_pi",
    "higher_order_fidelity",
    "higher_order_reduction",
    "rate_weight",
    "higher_order_fraction",
    "fidelity",
    "witness_value",
];

fn noise_cmd(gamma: Option<f64>, noise: &NoiseArgs, out: Option<&Path>) -> Result<String> {
    let cfg = noise_config(noise)?;
    let points: Vec<(String, f64)> = match gamma {
        Some(g) => vec![("-".to_string(), g)],
        None => catalog().into_iter().map(|e| (e.name.to_string(), e.gamma)).collect(),
    };
    let rows = points
        .par_iter()
        .map(|(name, g)| {
            let ho = higher_order_fourfolds(*g, &cfg)?;
            let rho = noisy_state(*g, &cfg)?;
            let w = witness_report(&rho, *g)?;
            Ok(vec![
                name.clone(),
                num(*g),
                num(g / PI),
                num(ho.fidelity),
                num(1.0 - ho.fidelity),
                num(ho.rate_weight),
                num(ho.higher_order_fraction),
                num(w.fidelity),
                num(w.witness_value),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    write_or_return(csv(&NOISE_HEADER, &rows), out)
}
