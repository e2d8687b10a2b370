//! CSV telemetry files.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use metamorph_core::aero::SegmentSample;
use metamorph_core::scenario::{TelemetrySink, VehicleSample};

pub const VEHICLE_CSV: &str = "vehicle.csv";
pub const SEGMENTS_CSV: &str = "segments.csv";

pub const VEHICLE_HEADER: [&str; 19] = [
    "t", "px", "py", "pz", "phi", "theta", "psi", "vx", "vy", "vz", "wx", "wy", "wz", "Fx", "Fy", "Fz", "Mx", "My", "Mz",
];

pub const SEGMENT_HEADER: [&str; 12] = [
    "t", "side", "index", "alpha_kin", "alpha_eff", "reynolds", "Fx", "Fy", "Fz", "Mx", "My", "Mz",
];

type Writer = csv::Writer<BufWriter<File>>;

/// Streams samples into `vehicle.csv` and, optionally, `segments.csv`.
pub struct CsvSink {
    vehicle: Writer,
    segments: Option<Writer>,
    row: Vec<String>,
}

fn open(path: &Path) -> std::io::Result<Writer> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

fn num(v: f64) -> String {
    // shortest round-trip form, exponent for very small or large values
    format!("{v:?}")
}

impl CsvSink {
    pub fn create(dir: &Path, segments: bool) -> csv::Result<Self> {
        let mut vehicle = open(&dir.join(VEHICLE_CSV))?;
        vehicle.write_record(VEHICLE_HEADER)?;
        let segments = if segments {
            let mut w = open(&dir.join(SEGMENTS_CSV))?;
            w.write_record(SEGMENT_HEADER)?;
            Some(w)
        } else {
            None
        };
        Ok(Self {
            vehicle,
            segments,
            row: Vec::with_capacity(VEHICLE_HEADER.len()),
        })
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        self.vehicle.flush()?;
        if let Some(s) = self.segments.as_mut() {
            s.flush()?;
        }
        Ok(())
    }
}

impl TelemetrySink for CsvSink {
    type Error = csv::Error;

    fn record(&mut self, v: &VehicleSample, segments: &[SegmentSample]) -> Result<(), Self::Error> {
        let s = &v.state;
        let (phi, theta, psi) = s.euler();
        let l = &v.loads.total;
        self.row.clear();
        self.row.push(num(s.time));
        self.row.extend(s.position.iter().map(|x| num(*x)));
        self.row.extend([phi, theta, psi].map(num));
        self.row.extend(s.velocity.iter().map(|x| num(*x)));
        self.row.extend(s.angular_velocity.iter().map(|x| num(*x)));
        self.row.extend(l.force.iter().chain(l.moment.iter()).map(|x| num(*x)));
        self.vehicle.write_record(&self.row)?;

        if let Some(w) = self.segments.as_mut() {
            for seg in segments {
                self.row.clear();
                self.row.push(num(s.time));
                self.row.push(seg.side.as_str().to_string());
                self.row.push(seg.index.to_string());
                self.row.push(num(seg.aero.alpha_kin));
                self.row.push(num(seg.aero.alpha_eff));
                self.row.push(num(seg.aero.reynolds));
                let f = &seg.load;
                self.row.extend(f.force.iter().chain(f.moment.iter()).map(|x| num(*x)));
                w.write_record(&self.row)?;
            }
        }
        Ok(())
    }
}
