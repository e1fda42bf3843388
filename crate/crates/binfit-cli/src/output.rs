//! Stable estimates-row schema shared by every model: unused parameter
//! columns are filled with NA so downstream tools keep alignment.

use binfit::moment::MomentValue;
use binfit::{FamilyParams, FitResult, MomentSummary};

pub const HEADER: &str = "id,_DIST_,mu,sigma,lambda,a,b,p,q,mean,variance,sd,cv,loglik,flags,error";

#[derive(Debug, Clone, Default)]
pub struct Row {
    pub id: String,
    pub dist: Option<String>,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub lambda: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub mean: MomentOut,
    pub variance: MomentOut,
    pub sd: MomentOut,
    pub cv: MomentOut,
    pub loglik: Option<f64>,
    pub flags: String,
    pub error: Option<String>,
}

/// Serialized moment: undefined values print as the literal NA.
#[derive(Debug, Clone, Default)]
pub struct MomentOut(Option<f64>);

impl From<MomentValue> for MomentOut {
    fn from(v: MomentValue) -> Self {
        MomentOut(v.finite())
    }
}

impl Row {
    pub fn error(id: &str, message: String) -> Row {
        Row { id: id.to_string(), error: Some(message), ..Row::default() }
    }

    pub fn from_fit(id: &str, fit: &FitResult) -> Row {
        let mut row = Row {
            id: id.to_string(),
            dist: Some(fit.family.to_string()),
            loglik: Some(fit.loglik),
            flags: flags_text(fit),
            ..Row::default()
        };
        row.set_moments(&fit.moments);
        match fit.params {
            FamilyParams::Egg(p) => {
                row.mu = Some(p.mu);
                row.sigma = Some(p.sigma);
                row.lambda = Some(p.lambda);
            }
            FamilyParams::Power(p) => {
                row.mu = Some(p.mu);
                row.sigma = Some(p.sigma);
                row.lambda = Some(p.lambda.lambda());
            }
            FamilyParams::Dagum(p) => {
                row.a = Some(p.a);
                row.b = Some(p.b);
                row.p = Some(p.p);
            }
            FamilyParams::Gb2(p) => {
                row.a = Some(p.a);
                row.b = Some(p.b);
                row.p = Some(p.p);
                row.q = Some(p.q);
            }
        }
        row
    }

    pub fn from_midpoint(id: &str, summary: &MomentSummary) -> Row {
        let mut row = Row {
            id: id.to_string(),
            dist: Some("midpoint".to_string()),
            ..Row::default()
        };
        row.set_moments(summary);
        row
    }

    fn set_moments(&mut self, m: &MomentSummary) {
        self.mean = m.mean.into();
        self.variance = m.variance.into();
        self.sd = m.sd.into();
        self.cv = m.cv.into();
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.id,
            self.dist.as_deref().unwrap_or("NA"),
            opt_num(self.mu),
            opt_num(self.sigma),
            opt_num(self.lambda),
            opt_num(self.a),
            opt_num(self.b),
            opt_num(self.p),
            opt_num(self.q),
            opt_num(self.mean.0),
            opt_num(self.variance.0),
            opt_num(self.sd.0),
            opt_num(self.cv.0),
            opt_num(self.loglik),
            self.flags,
            self.error.as_deref().unwrap_or(""),
        )
    }
}

fn flags_text(fit: &FitResult) -> String {
    if fit.flags.any() {
        fit.flags.to_string()
    } else {
        String::new()
    }
}

fn opt_num(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.6}"),
        None => "NA".to_string(),
    }
}
