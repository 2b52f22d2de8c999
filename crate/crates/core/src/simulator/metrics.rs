use std::fmt;

use crate::error::{Error, Result};

/// Every quantity a run reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    PEstablish,
    EstablishedLengthKm,
    EstablishedWidth,
    PReconfigure,
    NewLinks,
    ReusedLinks,
    AllLinks,
    ReconfiguredLengthKm,
    ReconfiguredWidth,
    Utilization,
    ActiveConnections,
    CapacityServed,
}

pub const METRIC_COUNT: usize = 12;

impl Metric {
    pub const ALL: [Metric; METRIC_COUNT] = [
        Metric::PEstablish,
        Metric::EstablishedLengthKm,
        Metric::EstablishedWidth,
        Metric::PReconfigure,
        Metric::NewLinks,
        Metric::ReusedLinks,
        Metric::AllLinks,
        Metric::ReconfiguredLengthKm,
        Metric::ReconfiguredWidth,
        Metric::Utilization,
        Metric::ActiveConnections,
        Metric::CapacityServed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::PEstablish => "p_establish",
            Metric::EstablishedLengthKm => "established_length_km",
            Metric::EstablishedWidth => "established_width",
            Metric::PReconfigure => "p_reconfigure",
            Metric::NewLinks => "new_links",
            Metric::ReusedLinks => "reused_links",
            Metric::AllLinks => "all_links",
            Metric::ReconfiguredLengthKm => "reconfigured_length_km",
            Metric::ReconfiguredWidth => "reconfigured_width",
            Metric::Utilization => "utilization",
            Metric::ActiveConnections => "active_connections",
            Metric::CapacityServed => "capacity_served",
        }
    }

    pub fn from_name(name: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One value per metric; `None` marks no data.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MetricValues([Option<f64>; METRIC_COUNT]);

impl MetricValues {
    pub fn get(&self, m: Metric) -> Option<f64> {
        self.0[m.index()]
    }

    pub fn set(&mut self, m: Metric, v: Option<f64>) {
        self.0[m.index()] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Metric, Option<f64>)> + '_ {
        Metric::ALL.into_iter().map(move |m| (m, self.get(m)))
    }
}

/// Per-hour measurements. Connection metrics are means over that hour's
/// attempts (or successes for path-shaped fields); network metrics are
/// taken at the end of the hour.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HourlyMetrics {
    pub hour: usize,
    pub values: MetricValues,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct HourAccumulator {
    est_attempts: u64,
    est_success: u64,
    est_length: f64,
    est_width: f64,
    rec_attempts: u64,
    rec_success: u64,
    new_links: f64,
    reused_links: f64,
    all_links: f64,
    rec_length: f64,
    rec_width: f64,
}

impl HourAccumulator {
    pub fn establish(&mut self, outcome: Option<(u64, usize)>) {
        self.est_attempts += 1;
        if let Some((length, width)) = outcome {
            self.est_success += 1;
            self.est_length += length as f64;
            self.est_width += width as f64;
        }
    }

    pub fn reconfigure(&mut self, outcome: Option<ReconfigSample>) {
        self.rec_attempts += 1;
        if let Some(s) = outcome {
            self.rec_success += 1;
            self.new_links += s.new_links as f64;
            self.reused_links += s.reused_links as f64;
            self.all_links += s.all_links as f64;
            self.rec_length += s.length_km as f64;
            self.rec_width += s.width as f64;
        }
    }

    pub fn finish(&self, hour: usize, utilization: f64, active: usize, capacity: u64) -> HourlyMetrics {
        let mean = |sum: f64, n: u64| (n > 0).then(|| sum / n as f64);
        let mut v = MetricValues::default();
        v.set(Metric::PEstablish, mean(self.est_success as f64, self.est_attempts));
        v.set(Metric::EstablishedLengthKm, mean(self.est_length, self.est_success));
        v.set(Metric::EstablishedWidth, mean(self.est_width, self.est_success));
        v.set(Metric::PReconfigure, mean(self.rec_success as f64, self.rec_attempts));
        v.set(Metric::NewLinks, mean(self.new_links, self.rec_success));
        v.set(Metric::ReusedLinks, mean(self.reused_links, self.rec_success));
        v.set(Metric::AllLinks, mean(self.all_links, self.rec_success));
        v.set(Metric::ReconfiguredLengthKm, mean(self.rec_length, self.rec_success));
        v.set(Metric::ReconfiguredWidth, mean(self.rec_width, self.rec_success));
        v.set(Metric::Utilization, Some(utilization));
        v.set(Metric::ActiveConnections, Some(active as f64));
        v.set(Metric::CapacityServed, Some(capacity as f64));
        HourlyMetrics { hour, values: v }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct ReconfigSample {
    pub new_links: usize,
    pub reused_links: usize,
    pub all_links: usize,
    pub length_km: u64,
    pub width: usize,
}

/// Mean of each metric over the hours that have data for it.
pub fn mean_over_hours(hours: &[HourlyMetrics]) -> MetricValues {
    let mut out = MetricValues::default();
    for m in Metric::ALL {
        let vals: Vec<f64> = hours.iter().filter_map(|h| h.values.get(m)).collect();
        if !vals.is_empty() {
            out.set(m, Some(vals.iter().sum::<f64>() / vals.len() as f64));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSummary {
    pub metric: Metric,
    /// Number of runs with data for the metric.
    pub n: usize,
    pub mean: Option<f64>,
    pub se: Option<f64>,
    /// `se / |mean|`; `None` when the mean is zero or missing.
    pub rse: Option<f64>,
}

/// Sample mean, standard error and relative standard error per metric.
pub fn population_mean<'a, I>(reports: I) -> Result<Vec<MetricSummary>>
where
    I: IntoIterator<Item = &'a MetricValues>,
{
    let reports: Vec<&MetricValues> = reports.into_iter().collect();
    if reports.len() < 2 {
        return Err(Error::TooFewReports(reports.len()));
    }
    Ok(Metric::ALL
        .into_iter()
        .map(|metric| {
            let xs: Vec<f64> = reports.iter().filter_map(|r| r.get(metric)).collect();
            let n = xs.len();
            if n < 2 {
                return MetricSummary {
                    metric,
                    n,
                    mean: xs.first().copied(),
                    se: None,
                    rse: None,
                };
            }
            // Shifted by the first sample so identical inputs give exact results.
            let shift = xs[0];
            let d_mean = xs.iter().map(|x| x - shift).sum::<f64>() / n as f64;
            let mean = shift + d_mean;
            let var = xs.iter().map(|x| (x - shift - d_mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let se = (var / n as f64).sqrt();
            MetricSummary {
                metric,
                n,
                mean: Some(mean),
                se: Some(se),
                rse: (mean != 0.0).then(|| se / mean.abs()),
            }
        })
        .collect())
}
