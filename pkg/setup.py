#! /usr/bin/env python

from setuptools import setup
from setuptools import find_packages

__version__ = '0.1.0'

setup(
    author           = 'Fundacion Dr. Manuel Sadosky',
    description      = 'Graph-walk context compression and structured prompting for Graph-RAG question answering',
    extras_require   = {
        'tiktoken': ['tiktoken'],
    },
    install_requires = [
        'httpx',
        'networkx',
        'pydot',
        'pygments',
        'pyparsing',
        'PyYAML',
        'tenacity',
    ],
    license          = 'BSD 2-Clause',
    name             = 'gwqa',
    classifiers      = [
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: BSD License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'Topic :: Scientific/Engineering :: Information Analysis',
        'Topic :: Software Development :: Libraries :: Python Modules',
    ],
    packages         = find_packages(exclude=['tests', 'tests.*']),
    package_data     = {
        'gwqa': ['data/*.txt'],
        'gwqa.analysis.prompts': ['templates/*.txt'],
    },
    python_requires  = '>=3.7',
    entry_points = {
        "console_scripts": [
            "GWQAcompress = gwqa.tools.compress.compress:main",
            "GWQArun = gwqa.tools.run.run:main",
            "GWQAscore = gwqa.tools.score.score:main",
            "GWQAtrace = gwqa.tools.trace.trace:main",
        ]
    },
    version          = __version__,
    zip_safe         = False
)
