"""
Linear versus non-linear knowledge combination
==============================================

A lead that cannot solve a story alone pools what team mates are willing to
share. Sociable leads add it up; curious, highly sociable leads raise each
member's share to a power set by their own share.
"""

from scrumsim.kernels import combine_linear, combine_nonlinear, shared_competence

lead_c, lead_sosd = 2.0, 1.0
members = [(0.5, 3.0), (0.25, 2.0), (-0.5, 2.0)]

for sosd, c in members:
    print(f"member sosd={sosd:5.2f} c={c:.1f} shares {shared_competence(sosd, c):5.2f}")

print("linear    :", combine_linear(lead_c, members))
print("non-linear:", combine_nonlinear(lead_c, lead_sosd, members))

##############################################################################
# The exponent is the lead's own share. Shares above 1 grow quickly; shares
# below 1 shrink, and unhelpful (negative) shares are ignored.

for lead_share in (0.5, 1.0, 2.0, 4.0, 8.0):
    total = combine_nonlinear(lead_share, 1.0, [(1.0, 3.0)])
    print(f"lead share {lead_share:3.1f}: effective competence {total:10.2f}")
