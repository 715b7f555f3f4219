"""Independent reference values for the unit tests, computed with
statsmodels/scipy/numpy. Writes tests/data/reference.json.

Durbin's alternative statistic has no statsmodels implementation; it is
recomputed here from its definition with numpy/statsmodels OLS. Robust and
classical ARMAX covariances come from a numeric Hessian and numeric per-
observation scores of the statsmodels SARIMAX likelihood, mapped to the
(mean intercept, beta, rho, theta, sigma) parameterization."""
import json
import pathlib

import numpy as np
import pandas as pd
import scipy.special as sp
import scipy.stats as st
import statsmodels.api as sm
from statsmodels.tools.numdiff import approx_fprime, approx_hess3
from statsmodels.tsa.adfvalues import mackinnonp
from statsmodels.tsa.statespace.sarimax import SARIMAX
from statsmodels.tsa.stattools import acf, adfuller, pacf

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"


def durbin_alt(y, x, lags, drop=False):
    e = sm.OLS(y, sm.add_constant(x)).fit().resid
    n = len(e)
    lagged = np.column_stack([np.r_[np.zeros(k), e[:-k]] for k in range(1, lags + 1)])
    z = np.column_stack([np.ones(n), x, lagged])
    target = e
    if drop:
        z, target = z[lags:], e[lags:]
    aux = sm.OLS(target, z).fit()
    c = aux.params[2:]
    v = aux.cov_params()[2:, 2:]
    return float(c @ np.linalg.solve(v, c)), int(len(target))


def ols_summary(y, x):
    f = sm.OLS(y, sm.add_constant(x)).fit()
    r, p = st.pearsonr(y, x)
    return {
        "intercept": f.params[0], "slope": f.params[1], "slope_se": f.bse[1],
        "slope_t": f.tvalues[1], "slope_p": f.pvalues[1], "r_squared": f.rsquared,
        "r": r, "r_p": p,
    }


def adf(s):
    res = adfuller(s, maxlag=12, autolag=None, regression="c")
    return {"tau": res[0], "p": res[1], "nobs": res[3]}


def armax(dy, dx):
    model = SARIMAX(dy, exog=dx, order=(1, 0, 1), trend="c")
    fit = model.fit(disp=0, method="bfgs", maxiter=5000, gtol=1e-10)
    s = fit.params
    p = np.array([s[0] / (1 - s[2]), s[1], s[2], s[3], np.sqrt(s[4])])

    def to_sm(q):
        return [q[0] * (1 - q[2]), q[1], q[2], q[3], q[4] ** 2]

    hess = approx_hess3(p, lambda q: model.loglike(to_sm(q)))
    scores = approx_fprime(p, lambda q: model.loglikeobs(to_sm(q)), centered=True)
    classical = np.linalg.inv(-hess)
    robust = classical @ (scores.T @ scores) @ classical
    return {
        "params": p.tolist(), "loglik": float(model.loglike(to_sm(p))),
        "se_classical": np.sqrt(np.diag(classical)).tolist(),
        "se_robust": np.sqrt(np.diag(robust)).tolist(),
        "vcov_robust": robust.tolist(),
    }


def synthetic():
    d = pd.read_csv(DATA / "synthetic_levels.csv")
    y = d["y"].to_numpy()
    x = d["x"].interpolate(limit_area="inside").to_numpy()
    dy, dx = np.diff(y), np.diff(x)
    levels_ols = sm.OLS(y, sm.add_constant(x)).fit()
    diff_ols = sm.OLS(dy, sm.add_constant(dx)).fit()
    dz, dz_n = durbin_alt(y, x, 12)
    dd, dd_n = durbin_alt(y, x, 12, drop=True)
    ddz, _ = durbin_alt(dy, dx, 12)
    return {
        "x_interpolated": x.tolist(),
        "levels": ols_summary(y, x),
        "levels_durbin": {"zero_fill": dz, "zero_fill_nobs": dz_n, "drop_rows": dd, "drop_rows_nobs": dd_n},
        "adf": {"y": adf(y), "x": adf(x), "dy": adf(dy), "dx": adf(dx)},
        "differences": ols_summary(dy, dx),
        "differences_durbin": ddz,
        "levels_residual_acf": acf(levels_ols.resid, nlags=20, adjusted=False, fft=False).tolist(),
        "differences_residual_acf": acf(diff_ols.resid, nlags=20, adjusted=False, fft=False).tolist(),
        "differences_residual_pacf": pacf(diff_ols.resid, nlags=20, method="ldb").tolist(),
        "armax": armax(dy, dx),
    }


def mackinnon():
    taus = np.round(np.arange(-7.0, 3.01, 0.25), 2)
    return {
        "c": [[t, mackinnonp(t, regression="c")] for t in taus],
        "ct": [[t, mackinnonp(t, regression="ct")] for t in taus],
    }


def distributions():
    t_cases = [(0.5, 3), (1.96, 10), (2.5, 227), (8.0, 50), (15.0, 227), (40.0, 100)]
    chi_cases = [(1.0, 1), (12.0, 12), (33.93, 12), (67.25, 2), (473.98, 12), (200.0, 5)]
    q_cases = [1e-12, 1e-6, 0.001, 0.025, 0.3, 0.5, 0.8, 0.975, 0.999999]
    return {
        "student_t_two_sided": [[t, df, float(2 * st.t.sf(t, df))] for t, df in t_cases],
        "chi2_upper": [[x, df, float(st.chi2.sf(x, df))] for x, df in chi_cases],
        "normal_quantile": [[q, float(sp.ndtri(q))] for q in q_cases],
    }


def main():
    ref = {"synthetic_levels": synthetic(), "mackinnon": mackinnon(), "distributions": distributions()}
    with open(DATA / "reference.json", "w") as f:
        json.dump(ref, f, indent=1, default=float)
        f.write("\n")


if __name__ == "__main__":
    main()
