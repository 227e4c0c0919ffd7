from setuptools import find_packages, setup

from fairspread import __version__


def read(filename):
    with open(filename, encoding='utf-8') as fh:
        return fh.read()


setup(
    name='fairspread',
    version=__version__,
    description='Fairness-aware influence maximization: diffusion, transport-based fairness metrics, seed selection',
    long_description=read('README.md'),
    long_description_content_type='text/markdown',
    license='Apache-2.0',
    python_requires='>=3.10',
    packages=find_packages(exclude=['tests', 'tools*']),
    package_data={'fairspread': ['schemas/*.schema']},
    install_requires=[line.strip() for line in read('requirements.txt').splitlines()
                      if line.strip() and not line.startswith('setuptools')],
    entry_points={'console_scripts': ['fairspread=fairspread.app:main']},
)
