r"""
A command line script that selects seeds on a network with the plain
influence-maximization objective and with each audience-diversity
utility, then writes a text report comparing how evenly each seed set's
cascade divides among the communities.

To use, run the script at command line. By default it uses the small
barbell network that ships with the package (two loosely connected
communities of unequal size). Optionally specify another network and
community file, the seed budget with ``-k``, and the directory in which
to store the results with ``-d <directory>``. If no directory is given,
the results are stored in a new timestamped directory in the current
directory.


Example (at command line, assuming we are currently in the same
directory as this script)::

    > py audience_comparison.py -k 2 -d "./sample comparison results"


For help (at command line)::

    > py audience_comparison.py --help
"""

import os
import argparse
from datetime import datetime
from pathlib import Path

import diversified_influence
from diversified_influence import (
    AdimFamily,
    AdimUtilitySpec,
    DataLoader,
    MonteCarloSpread,
    RngSpec,
    SpreadModel,
    build_report,
    comparison_table,
    greedy,
    upper_greedy,
)
from diversified_influence.objectives import (
    AdimObjective,
    GlobalSpreadObjective,
    LinearCommunityObjective,
)
from diversified_influence.report_generator import (
    ReportGenerator,
    TextBlockSection,
    SeedListSection,
    TableSection,
)

FIXTURES = Path(diversified_influence.__file__).parent / 'fixtures'
DEFAULT_DIRECTORY = '.'
MASTER_SEED = 7


def select_all(source, k, universe, rng):
    """
    Seed sets for the baseline and the three utility families, keyed by
    method name in report order.
    """
    alpha = (1.0,) * source.C
    results = {
        'im': greedy(GlobalSpreadObjective(source), k, universe),
    }

    # CES is maximized through its rho-th power, which is submodular.
    ces = AdimUtilitySpec(AdimFamily.CES, alpha, rho=0.5)
    results['ces'] = greedy(AdimObjective(source, ces, power=True), k, universe)

    # The two non-submodular families are sandwiched between greedy runs
    # on linear upper bounds.
    complements = AdimObjective(source, AdimUtilitySpec(AdimFamily.COMPLEMENTS, alpha))
    results['complements'] = upper_greedy(
        complements, LinearCommunityObjective.community_bounds(source, alpha),
        k, universe, rng=rng)
    cobb_douglas = AdimObjective(source, AdimUtilitySpec(AdimFamily.COBB_DOUGLAS, alpha))
    results['cobb-douglas'] = upper_greedy(
        cobb_douglas, [LinearCommunityObjective.arithmetic_mean(source, alpha)],
        k, universe, rng=rng)
    return results


if __name__ == '__main__':
    parser = argparse.ArgumentParser(
        prog="Audience Diversity Comparison",
        description="Compare influence maximization with audience-diverse seed selection",
    )
    parser.add_argument(
        '--network', default=str(FIXTURES / 'barbell.txt'), help="Edge list file")
    parser.add_argument(
        '--communities', default=str(FIXTURES / 'barbell_communities.txt'),
        help="Community membership file")
    parser.add_argument('-k', type=int, default=2, help="Seed budget")
    parser.add_argument('-M', '--trials', type=int, default=1000, help="Cascades per estimate")
    parser.add_argument(
        '-d', '--directory', default=DEFAULT_DIRECTORY, help="Directory in which to write results")
    args = vars(parser.parse_args())

    # Where we'll save our results.
    if args['directory'] == DEFAULT_DIRECTORY:
        subdir = "audience_comparison_" + datetime.now().strftime("%Y%m%d_%H%M%S")
        results_dir = Path(DEFAULT_DIRECTORY) / subdir
    else:
        results_dir = Path(args['directory'])
    os.makedirs(results_dir, exist_ok=True)

    print("Loading network... ", end='')
    dataset = DataLoader(network=args['network'], communities=args['communities']).load()
    net = dataset.network
    cs = dataset.community_structure
    print(f"{net.node_count} nodes, {net.edge_count} edges, {cs.C} communities.")

    print("Selecting seeds... ", end='')
    rng = RngSpec(MASTER_SEED)
    source = MonteCarloSpread(net, SpreadModel.IC, cs, trials=args['trials'], rng=rng)
    results = select_all(source, args['k'], range(net.node_count), rng)
    print("Done.")

    print("Evaluating... ", end='')
    # Final estimates use a stream independent of the one used for selection.
    eval_rng = rng.child(1)
    reports = {
        name: build_report(net, SpreadModel.IC, result.seeds, cs, 2 * args['trials'], eval_rng)
        for name, result in results.items()
    }
    table = comparison_table(reports, baseline='im')
    table.to_csv(results_dir / 'comparison.csv', index=False, lineterminator='\n')
    print("Done.")

    report_sections = [
        TextBlockSection(
            text=f"Seed selection on {args['network']} with k = {args['k']}.",
            header='An audience diversity comparison.'),
    ]
    for name, report in reports.items():
        report_sections.append(SeedListSection(list(report.seeds), subheader=name))
    report_sections.append(TableSection(table, header='Against plain influence maximization:'))

    report_generator = ReportGenerator(report_sections=report_sections)
    report_fp = results_dir / 'audience comparison.txt'
    report_text = report_generator.write_report_to_file(report_fp, mode='w')

    print(report_text)
    print("Comparison complete. Results saved to:")
    print(os.path.abspath(results_dir))
