"""Per-site ergotropy of correlated families against the single-copy and product values."""

from corrwork.bounds import prop3_bound
from corrwork.ergotropy import family_ergotropy_per_site, product_ergotropy_per_site, single_site_ergotropy
from corrwork.instances import fix_4
from corrwork.spectra import make_partition
from corrwork.thermo import total_ergotropy

sys = fix_4()
print(f"E = {sys.mean_energy:.4f}  single-site ergotropy = {single_site_ergotropy(sys):.4f}  "
      f"many-copy limit = {total_ergotropy(sys):.4f}")

print("\nN   product   A(L=2)   B(L=2)   C(L=2)   E - Delta/N")
p = make_partition(sys, 2, "uniform")
for N in (2, 3, 4, 5):
    row = [product_ergotropy_per_site(sys, N)] + [family_ergotropy_per_site(sys, p, f, N) for f in "ABC"]
    flat = prop3_bound(sys, sys.rank, N).raw
    print(f"{N:<3} " + "  ".join(f"{v:7.4f}" for v in row) + f"   {flat:7.4f}")
